"""File formats and string rendering.

JSON schemas:

* theory: ``{"features": [{"name": "f1", "domain": ["0", "1"]}, ...],
  "classes": ["0", "1"]}``
* classifier: ``{"kind": "expr", "formula": "f1=1 | f2=1"}`` (class index 1
  where the formula holds) or ``{"kind": "table", "rows": [[token, ...,
  class_token], ...]}`` with one row per instance of the space.
* constraints: any of the keys ``nogoods`` (lists of "feature=value"
  strings), ``implications`` (objects with "if" and "then" literal lists) and
  ``expression`` (a boolean formula; instances falsifying it are forbidden).

Datasets are CSV: a header of feature names, optionally followed by a final
class column (any header name that is not a feature). Labels come from that
column or, when absent, from a classifier.

Everything wrong with an input file is reported as ParseError carrying the
file name, so the command line can map it to its own exit code.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any

from .classifiers import Classifier, ExpressionClassifier, TableClassifier
from .constraints import ConstraintSet, Implication
from .datasets import Dataset
from .errors import ParseError, StructuralError
from .expressions import parse_expression
from .theory import (
    Budgets,
    ClassificationTheory,
    Instance,
    PartialAssignment,
    enumerate_feature_space,
)

# ----------------------------------------------------------------------
# loading


def _read_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(str(exc), source=str(path)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}", source=str(path)) from None


def _expect(condition: bool, message: str, source: str) -> None:
    if not condition:
        raise ParseError(message, source=source)


def load_theory(path: str | Path) -> ClassificationTheory:
    data = _read_json(path)
    src = str(path)
    _expect(isinstance(data, dict), "theory must be a JSON object", src)
    _expect(isinstance(data.get("features"), list), "missing 'features' list", src)
    _expect(isinstance(data.get("classes"), list), "missing 'classes' list", src)
    features = []
    for entry in data["features"]:
        _expect(isinstance(entry, dict), "each feature must be an object", src)
        _expect(isinstance(entry.get("name"), str), "feature needs a 'name'", src)
        _expect(isinstance(entry.get("domain"), list), "feature needs a 'domain' list", src)
        features.append((entry["name"], [str(t) for t in entry["domain"]]))
    try:
        return ClassificationTheory(features, [str(t) for t in data["classes"]])
    except StructuralError as exc:
        raise ParseError(str(exc), source=src) from None


def parse_literal_token(theory: ClassificationTheory, text: str, source: str = "literal"):
    text = text.strip()
    if text.count("=") != 1:
        raise ParseError(f"literal {text!r} must look like feature=value", source=source)
    name, _, token = text.partition("=")
    try:
        return theory.literal(name.strip(), token.strip())
    except StructuralError as exc:
        raise ParseError(str(exc), source=source) from None


def _assignment_from_tokens(
    theory: ClassificationTheory, tokens: list, source: str
) -> PartialAssignment:
    _expect(isinstance(tokens, list), "expected a list of literals", source)
    lits = [parse_literal_token(theory, str(t), source) for t in tokens]
    try:
        return PartialAssignment(theory, lits)
    except StructuralError as exc:
        raise ParseError(str(exc), source=source) from None


def load_constraints(
    theory: ClassificationTheory, path: str | Path, budgets: Budgets = Budgets()
) -> ConstraintSet:
    data = _read_json(path)
    src = str(path)
    _expect(isinstance(data, dict), "constraints must be a JSON object", src)
    unknown = set(data) - {"nogoods", "implications", "expression"}
    _expect(not unknown, f"unknown constraint keys: {sorted(unknown)}", src)
    nogoods = []
    for entry in data.get("nogoods", []):
        ng = _assignment_from_tokens(theory, entry, src)
        _expect(len(ng) > 0, "a nogood needs at least one literal", src)
        nogoods.append(ng)
    implications = []
    for entry in data.get("implications", []):
        _expect(
            isinstance(entry, dict) and "if" in entry and "then" in entry,
            "each implication needs 'if' and 'then' lists",
            src,
        )
        premise = _assignment_from_tokens(theory, entry["if"], src)
        conclusion = _assignment_from_tokens(theory, entry["then"], src)
        try:
            implications.append(Implication(premise, conclusion))
        except StructuralError as exc:
            raise ParseError(str(exc), source=src) from None
    expression = data.get("expression")
    if expression is not None:
        _expect(isinstance(expression, str), "'expression' must be a string", src)
        try:
            expression = parse_expression(theory, expression)
        except ParseError as exc:
            raise ParseError(str(exc), source=src) from None
    return ConstraintSet.build(
        theory,
        nogoods=nogoods,
        implications=implications,
        expression=expression,
        budgets=budgets,
    )


def load_classifier(
    theory: ClassificationTheory, path: str | Path, budgets: Budgets = Budgets()
) -> Classifier:
    data = _read_json(path)
    src = str(path)
    _expect(isinstance(data, dict), "classifier must be a JSON object", src)
    kind = data.get("kind")
    if kind == "expr":
        _expect(isinstance(data.get("formula"), str), "expr classifier needs a 'formula'", src)
        _expect(
            len(theory.classes) == 2,
            "expr classifiers need a two-class theory",
            src,
        )
        try:
            return ExpressionClassifier(theory, data["formula"])
        except ParseError as exc:
            raise ParseError(str(exc), source=src) from None
    if kind == "table":
        _expect(isinstance(data.get("rows"), list), "table classifier needs 'rows'", src)
        rows = []
        for entry in data["rows"]:
            _expect(
                isinstance(entry, list) and len(entry) == theory.n_features + 1,
                "each table row needs one token per feature plus a class",
                src,
            )
            try:
                inst = Instance.from_tokens(theory, [str(t) for t in entry[:-1]])
                rows.append((inst.values, theory.class_index(str(entry[-1]))))
            except StructuralError as exc:
                raise ParseError(str(exc), source=src) from None
        try:
            return TableClassifier.from_rows(theory, rows, budgets)
        except StructuralError as exc:
            raise ParseError(str(exc), source=src) from None
    raise ParseError(f"unknown classifier kind {kind!r}", source=src)


def load_dataset(
    theory: ClassificationTheory,
    path: str | Path,
    constraints: ConstraintSet | None = None,
    classifier: Classifier | None = None,
) -> Dataset:
    """Load a CSV dataset; labels come from the trailing class column or,
    when the header has feature columns only, from the classifier."""
    path = Path(path)
    src = str(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(str(exc), source=src) from None
    reader = csv.reader(io.StringIO(text))
    table = [row for row in reader if row]
    _expect(len(table) >= 2, "dataset needs a header and at least one row", src)
    header = [h.strip() for h in table[0]]
    names = [f.name for f in theory.features]
    if header == names:
        has_class = False
    elif len(header) == len(names) + 1 and header[:-1] == names and header[-1] not in names:
        has_class = True
    else:
        raise ParseError(
            f"header must list the feature names {names} (optionally plus a class column)",
            source=src,
        )
    if not has_class and classifier is None:
        raise ParseError(
            "dataset has no class column and no classifier was given", source=src
        )
    value_rows = []
    labels = []
    for num, row in enumerate(table[1:], start=2):
        row = [t.strip() for t in row]
        _expect(
            len(row) == len(header),
            f"line {num}: expected {len(header)} fields, got {len(row)}",
            src,
        )
        try:
            inst = Instance.from_tokens(theory, row[: theory.n_features])
        except StructuralError as exc:
            raise ParseError(f"line {num}: {exc}", source=src) from None
        value_rows.append(inst.values)
        if has_class:
            try:
                labels.append(theory.class_index(row[-1]))
            except StructuralError as exc:
                raise ParseError(f"line {num}: {exc}", source=src) from None
        else:
            labels.append(classifier.predict(inst))
    return Dataset.from_rows(theory, value_rows, labels, constraints=constraints)


def parse_instance_spec(theory: ClassificationTheory, spec: str) -> Instance:
    """Parse "f1=1,f2=0" into a total instance (every feature exactly once)."""
    source = "instance"
    assignment = _assignment_from_tokens(
        theory, [p for p in spec.split(",") if p.strip()], source
    )
    if len(assignment) != theory.n_features:
        missing = [
            f.name
            for f in theory.features
            if assignment.value_of(f.index) is None
        ]
        raise ParseError(
            f"instance spec must assign every feature (missing: {', '.join(missing)})",
            source=source,
        )
    values = [assignment.value_of(f) for f in range(theory.n_features)]
    return Instance(theory, values)


# ----------------------------------------------------------------------
# dumping (used to write fixture directories)


def theory_to_dict(theory: ClassificationTheory) -> dict:
    return {
        "features": [
            {"name": f.name, "domain": list(f.domain)} for f in theory.features
        ],
        "classes": list(theory.classes),
    }


def classifier_to_dict(classifier: Classifier) -> dict:
    if isinstance(classifier, ExpressionClassifier):
        return {"kind": "expr", "formula": str(classifier.expression)}
    if isinstance(classifier, TableClassifier):
        theory = classifier.theory
        rows = []
        for inst in enumerate_feature_space(theory):
            c = classifier.labels[inst.rank()]
            rows.append(list(inst.tokens()) + [theory.classes[c]])
        return {"kind": "table", "rows": rows}
    raise StructuralError(f"cannot serialize classifier {type(classifier).__name__}")


def constraints_to_dict(constraints: ConstraintSet) -> dict:
    theory = constraints.theory
    return {
        "nogoods": [
            [theory.render_literal(lit) for lit in ng.literals]
            for ng in constraints.nogoods
        ]
    }


def dataset_to_csv(dataset: Dataset, class_column: str = "class") -> str:
    theory = dataset.theory
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([f.name for f in theory.features] + [class_column])
    for inst, c in zip(dataset.instances, dataset.labels):
        writer.writerow(list(inst.tokens()) + [theory.classes[int(c)]])
    return out.getvalue()


# ----------------------------------------------------------------------
# rendering


def render_assignment(assignment: PartialAssignment) -> str:
    theory = assignment.theory
    inner = ", ".join(theory.render_literal(lit) for lit in assignment.literals)
    return "{" + inner + "}"


def render_instance(instance: Instance) -> str:
    return ",".join(
        f"{feat.name}={tok}"
        for feat, tok in zip(instance.theory.features, instance.tokens())
    )
