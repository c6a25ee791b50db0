"""Classifiers over finite-domain instances.

Two concrete forms, both total over the feature space:

* ``TableClassifier``: an explicit lookup table, one class per instance.
  Construction checks totality (every instance exactly once).
* ``ExpressionClassifier``: a boolean expression; instances satisfying it get
  class index 1, the rest class index 0.

Classes are handled as indices into the theory's class tuple, mirroring how
feature values are handled.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import ConstantClassifierError, StructuralError
from .expressions import Expr, parse_expression
from .theory import Budgets, ClassificationTheory, Instance, unrank_instance


class Classifier:
    """Interface: a total map from instances to class indices."""

    theory: ClassificationTheory

    def predict(self, instance: Instance) -> int:
        raise NotImplementedError

    def class_token(self, index: int) -> str:
        return self.theory.classes[index]


class TableClassifier(Classifier):
    """Lookup-table classifier, total over the feature space."""

    def __init__(self, theory: ClassificationTheory, labels: Sequence[int]):
        size = theory.space_size()
        if len(labels) != size:
            raise StructuralError(
                f"label table has {len(labels)} entries, space has {size} instances"
            )
        labels = tuple(int(c) for c in labels)
        for c in labels:
            if not 0 <= c < len(theory.classes):
                raise StructuralError(f"class index {c} out of range")
        self.theory = theory
        self.labels = labels

    @classmethod
    def from_rows(
        cls,
        theory: ClassificationTheory,
        rows: Iterable[tuple[Sequence[int], int]],
        budgets: Budgets = Budgets(),
    ) -> "TableClassifier":
        """Build from (values, class index) rows; must cover the space exactly.

        Rows listing the same instance twice, or leaving any instance out,
        raise StructuralError naming the offender.
        """
        size = theory.space_size()
        if size > budgets.space:
            from .errors import CapacityError

            raise CapacityError("classifier table too large", size, budgets.space)
        labels: list[int | None] = [None] * size
        for values, c in rows:
            inst = Instance(theory, values)
            r = inst.rank()
            if labels[r] is not None:
                raise StructuralError(f"instance {inst!r} listed twice")
            if not 0 <= int(c) < len(theory.classes):
                raise StructuralError(f"class index {c} out of range")
            labels[r] = int(c)
        for r, c in enumerate(labels):
            if c is None:
                raise StructuralError(
                    f"classifier table is not total: missing {unrank_instance(theory, r)!r}"
                )
        return cls(theory, labels)  # type: ignore[arg-type]

    def predict(self, instance: Instance) -> int:
        if instance.theory != self.theory:
            raise StructuralError("instance built against a different theory")
        return self.labels[instance.rank()]


class ExpressionClassifier(Classifier):
    """Boolean-expression classifier: class 1 where the formula holds, else 0."""

    def __init__(self, theory: ClassificationTheory, expression: str | Expr):
        if isinstance(expression, str):
            expression = parse_expression(theory, expression)
        self.theory = theory
        self.expression = expression

    def predict(self, instance: Instance) -> int:
        if instance.theory != self.theory:
            raise StructuralError("instance built against a different theory")
        return 1 if self.expression.evaluate(instance.values) else 0


def assert_non_constant(classifier: Classifier, instances: Iterable[Instance]) -> None:
    """Raise ConstantClassifierError unless at least two classes occur."""
    seen: set[int] = set()
    for inst in instances:
        seen.add(classifier.predict(inst))
        if len(seen) > 1:
            return
    raise ConstantClassifierError(
        "classifier is constant on the relevant instance space"
    )
