"""Built-in scenarios, scenario generators and fixture directories.

A scenario bundles a theory with whichever of classifier, constraint set and
dataset it uses. The built-in registry carries the worked examples used by
the test suite and the ``properties`` command; ``random_scenario`` grows the
same shapes from a seeded generator for the randomized suites, and
``majority_scenario`` builds the scaling family (class mirrors a threshold
vote of the other features, enforced by a constraint).

Every built-in scenario also exists as an on-disk fixture directory (written
by ``write_fixture``), and a test keeps the two representations in sync.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from pathlib import Path

from .classifiers import Classifier, ExpressionClassifier, TableClassifier
from .constraints import ConstraintSet, Implication
from .coverage import InstanceSpace
from .datasets import Dataset, DatasetEngine
from .errors import StructuralError, UnsatisfiableConstraintsError
from .exact import ExactEngine
from .formats import (
    classifier_to_dict,
    constraints_to_dict,
    dataset_to_csv,
    load_classifier,
    load_constraints,
    load_dataset,
    load_theory,
    theory_to_dict,
)
from .theory import Budgets, ClassificationTheory, Instance, PartialAssignment


@dataclass
class ScenarioBundle:
    """One self-contained explanation scenario."""

    name: str
    theory: ClassificationTheory
    classifier: Classifier | None = None
    constraints: ConstraintSet | None = None
    dataset: Dataset | None = None
    description: str = ""

    def exact_engine(self, budgets: Budgets = Budgets()) -> ExactEngine:
        if self.classifier is None:
            raise StructuralError(f"scenario {self.name!r} has no classifier")
        return ExactEngine(self.theory, self.classifier, self.constraints, budgets)

    def dataset_engine(self, budgets: Budgets = Budgets()) -> DatasetEngine:
        if self.dataset is None:
            raise StructuralError(f"scenario {self.name!r} has no dataset")
        return DatasetEngine(self.dataset, budgets)

    def feasible_space(self, budgets: Budgets = Budgets()) -> InstanceSpace:
        return InstanceSpace.feasible(self.theory, self.constraints, budgets)


# ----------------------------------------------------------------------
# helpers


def _binary_theory(n: int, prefix: str = "f") -> ClassificationTheory:
    return ClassificationTheory(
        [(f"{prefix}{i}", ("0", "1")) for i in range(1, n + 1)], ("0", "1")
    )


def _pa(theory: ClassificationTheory, *pairs: tuple[str, str]) -> PartialAssignment:
    return PartialAssignment(theory, [theory.literal(n, v) for n, v in pairs])


# ----------------------------------------------------------------------
# built-in scenarios


def scenario_ex1() -> ScenarioBundle:
    theory = _binary_theory(2)
    return ScenarioBundle(
        "ex1",
        theory,
        classifier=ExpressionClassifier(theory, "f1=1 | f2=1"),
        description="two binary features, class is the OR of both, unconstrained",
    )


def scenario_ex1c() -> ScenarioBundle:
    theory = _binary_theory(2)
    return ScenarioBundle(
        "ex1c",
        theory,
        classifier=ExpressionClassifier(theory, "f1=1 | f2=1"),
        constraints=ConstraintSet(theory, [_pa(theory, ("f1", "1"), ("f2", "0"))]),
        description="the OR scenario with f1=1,f2=0 forbidden",
    )


def scenario_ex2() -> ScenarioBundle:
    theory = _binary_theory(2)
    return ScenarioBundle(
        "ex2",
        theory,
        classifier=ExpressionClassifier(theory, "f1=0"),
        constraints=ConstraintSet(theory, [_pa(theory, ("f1", "1"), ("f2", "0"))]),
        description="class is NOT f1, with f1=1,f2=0 forbidden",
    )


def scenario_ex2s() -> ScenarioBundle:
    theory = _binary_theory(2)
    classifier = ExpressionClassifier(theory, "f1=0")
    rows = [(0, 0), (0, 1), (1, 0)]
    labels = [classifier.predict(Instance(theory, r)) for r in rows]
    return ScenarioBundle(
        "ex2s",
        theory,
        classifier=classifier,
        dataset=Dataset.from_rows(theory, rows, labels),
        description="the NOT-f1 classifier observed through a three-row sample",
    )


def scenario_ex3() -> ScenarioBundle:
    theory = _binary_theory(2)
    classifier = ExpressionClassifier(theory, "f1=1 | f2=1")
    constraints = ConstraintSet.build(
        theory,
        implications=[Implication(_pa(theory, ("f2", "1")), _pa(theory, ("f1", "1")))],
    )
    rows = [(0, 0), (1, 1)]
    labels = [classifier.predict(Instance(theory, r)) for r in rows]
    return ScenarioBundle(
        "ex3",
        theory,
        classifier=classifier,
        constraints=constraints,
        dataset=Dataset.from_rows(theory, rows, labels, constraints=constraints),
        description="the OR classifier where f2=1 forces f1=1, plus a two-row sample",
    )


def majority_scenario(n: int) -> ScenarioBundle:
    """n binary features; the last feature equals a threshold vote over the
    others (at least floor(n/2) ones), enforced as a constraint, and the class
    simply reads that last feature."""
    if n < 3:
        raise StructuralError("majority scenario needs at least three features")
    theory = _binary_theory(n)
    k = n // 2
    voters = [f"f{i}" for i in range(1, n)]
    terms = [
        "(" + " & ".join(f"{name}=1" for name in combo) + ")"
        for combo in itertools.combinations(voters, k)
    ]
    atleast = " | ".join(terms)
    expression = f"(f{n}=1 & ({atleast})) | (f{n}=0 & !({atleast}))"
    return ScenarioBundle(
        f"ex4-n{n}",
        theory,
        classifier=ExpressionClassifier(theory, f"f{n}=1"),
        constraints=ConstraintSet.build(theory, expression=expression),
        description=f"{n} binary features, f{n} mirrors a {k}-of-{n - 1} vote",
    )


def scenario_ex5() -> ScenarioBundle:
    theory = _binary_theory(3)
    constraints = ConstraintSet.build(
        theory,
        implications=[
            Implication(
                _pa(theory, ("f1", "1"), ("f2", "1")), _pa(theory, ("f3", "1"))
            ),
            Implication(
                _pa(theory, ("f3", "1")), _pa(theory, ("f1", "1"), ("f2", "1"))
            ),
        ],
    )
    return ScenarioBundle(
        "ex5",
        theory,
        classifier=ExpressionClassifier(theory, "f3=1"),
        constraints=constraints,
        description="f3 holds exactly when f1 and f2 both do; class reads f3",
    )


def scenario_ex6() -> ScenarioBundle:
    theory = _binary_theory(4)
    classifier = ExpressionClassifier(theory, "(f1=1 & f2=1) | (f3=1 & f4=1)")
    rows = [
        (0, 1, 0, 0),
        (0, 1, 0, 1),
        (0, 1, 1, 0),
        (0, 0, 1, 1),
        (1, 1, 1, 1),
        (1, 1, 0, 1),
    ]
    labels = [classifier.predict(Instance(theory, r)) for r in rows]
    return ScenarioBundle(
        "ex6",
        theory,
        classifier=classifier,
        dataset=Dataset.from_rows(theory, rows, labels),
        description="two-conjunction classifier observed through six sampled rows",
    )


def scenario_irr_ab() -> ScenarioBundle:
    theory = ClassificationTheory(
        [("A", ("0", "1")), ("B", ("0", "1")), ("C", ("0", "1"))], ("0", "1")
    )
    classifier = ExpressionClassifier(theory, "A=1")
    constraints = ConstraintSet(
        theory,
        [_pa(theory, ("A", "1"), ("B", "0")), _pa(theory, ("A", "0"), ("B", "1"))],
    )
    rows = [(0, 0, 0), (0, 0, 1), (1, 1, 0), (1, 1, 1)]
    labels = [classifier.predict(Instance(theory, r)) for r in rows]
    return ScenarioBundle(
        "irr-ab",
        theory,
        classifier=classifier,
        constraints=constraints,
        dataset=Dataset.from_rows(theory, rows, labels, constraints=constraints),
        description="A and B locked equal, class reads A; sample lists the feasible rows",
    )


def scenario_car() -> ScenarioBundle:
    theory = ClassificationTheory(
        [
            ("colour", ("White", "Red", "Blue")),
            ("power", ("High", "Medium", "Low")),
            ("state", ("High", "Medium", "Low")),
        ],
        ("0", "1"),
    )
    rows = [
        Instance.from_tokens(theory, ("White", "High", "High")),
        Instance.from_tokens(theory, ("White", "High", "Medium")),
        Instance.from_tokens(theory, ("Red", "Medium", "Low")),
        Instance.from_tokens(theory, ("Blue", "High", "Low")),
    ]
    labels = [1, 1, 0, 1]
    return ScenarioBundle(
        "car",
        theory,
        dataset=Dataset.from_rows(theory, [r.values for r in rows], labels),
        description="a four-row car valuation sample with no classifier behind it",
    )


#: Built-in scenario builders in presentation order.
BUILTIN_SCENARIOS = {
    "ex1": scenario_ex1,
    "ex1c": scenario_ex1c,
    "ex2": scenario_ex2,
    "ex2s": scenario_ex2s,
    "ex3": scenario_ex3,
    "ex4-n3": lambda: majority_scenario(3),
    "ex4-n5": lambda: majority_scenario(5),
    "ex4-n7": lambda: majority_scenario(7),
    "ex5": scenario_ex5,
    "ex6": scenario_ex6,
    "irr-ab": scenario_irr_ab,
    "car": scenario_car,
}


def builtin_scenario(name: str) -> ScenarioBundle:
    try:
        return BUILTIN_SCENARIOS[name]()
    except KeyError:
        raise StructuralError(f"unknown scenario {name!r}") from None


def builtin_scenarios() -> list[ScenarioBundle]:
    return [build() for build in BUILTIN_SCENARIOS.values()]


# ----------------------------------------------------------------------
# random scenarios


def random_scenario(
    rng: random.Random,
    name: str = "random",
    min_features: int = 2,
    max_features: int = 4,
    with_dataset: bool = True,
) -> ScenarioBundle:
    """Grow a small random scenario suitable for exhaustive cross-checking.

    Binary features (min_features to max_features of them), a random table
    classifier, an optional random nogood set, and optionally a dataset
    sampled from the feasible space. Resamples until the constraints are
    satisfiable, the classifier is non-constant on the feasible space, and
    the dataset (when asked for) contains both classes.
    """
    n = rng.randint(min_features, max_features)
    theory = _binary_theory(n)
    while True:
        constraints = None
        if rng.random() < 0.7:
            nogoods = []
            for _ in range(rng.randint(1, 3)):
                width = rng.randint(1, n)
                feats = rng.sample(range(n), width)
                nogoods.append(
                    PartialAssignment(
                        theory, [(f, rng.randint(0, 1)) for f in feats]
                    )
                )
            try:
                constraints = ConstraintSet(theory, nogoods)
            except UnsatisfiableConstraintsError:
                continue
        feasible = InstanceSpace.feasible(theory, constraints)
        labels = [rng.randint(0, 1) for _ in range(theory.space_size())]
        classifier = TableClassifier(theory, labels)
        feasible_labels = {classifier.predict(inst) for inst in feasible.instances}
        if len(feasible_labels) < 2:
            continue
        dataset = None
        if with_dataset:
            rows = [
                inst for inst in feasible.instances if rng.random() < 0.7
            ]
            if len({classifier.predict(r) for r in rows}) < 2:
                continue
            dataset = Dataset.from_rows(
                theory,
                [r.values for r in rows],
                [classifier.predict(r) for r in rows],
                constraints=constraints,
            )
        return ScenarioBundle(
            name,
            theory,
            classifier=classifier,
            constraints=constraints,
            dataset=dataset,
            description="randomly generated scenario",
        )


# ----------------------------------------------------------------------
# fixture directories


def write_fixture(bundle: ScenarioBundle, directory: str | Path) -> None:
    """Write a scenario as the on-disk fixture layout (theory.json plus
    whichever of classifier.json, constraints.json, dataset.csv apply)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / "theory.json").write_text(
        json.dumps(theory_to_dict(bundle.theory), indent=2) + "\n"
    )
    if bundle.classifier is not None:
        (directory / "classifier.json").write_text(
            json.dumps(classifier_to_dict(bundle.classifier), indent=2) + "\n"
        )
    if bundle.constraints is not None and len(bundle.constraints):
        (directory / "constraints.json").write_text(
            json.dumps(constraints_to_dict(bundle.constraints), indent=2) + "\n"
        )
    if bundle.dataset is not None:
        (directory / "dataset.csv").write_text(dataset_to_csv(bundle.dataset))


def load_fixture(directory: str | Path, name: str | None = None) -> ScenarioBundle:
    """Load a fixture directory back into a scenario bundle."""
    directory = Path(directory)
    theory = load_theory(directory / "theory.json")
    classifier = None
    if (directory / "classifier.json").exists():
        classifier = load_classifier(theory, directory / "classifier.json")
    constraints = None
    if (directory / "constraints.json").exists():
        constraints = load_constraints(theory, directory / "constraints.json")
    dataset = None
    if (directory / "dataset.csv").exists():
        dataset = load_dataset(
            theory, directory / "dataset.csv", constraints=constraints
        )
    return ScenarioBundle(
        name or directory.name,
        theory,
        classifier=classifier,
        constraints=constraints,
        dataset=dataset,
    )
