"""Hard domain constraints, represented as nogoods.

A nogood is a non-empty partial assignment that is forbidden: a partial
assignment E satisfies the constraint set exactly when it contains no nogood
in full. The check is anti-monotone by construction (removing literals from a
satisfying assignment can never trip a nogood), which is what lets every
explanation procedure in this package treat constraint satisfaction as free
once the explained instance itself is feasible.

Two richer input forms compile down to nogoods:

* Implications ``premise -> conclusion`` over disjoint feature sets: for each
  conclusion literal (f, v) and each other value w of f, the assignment
  ``premise + (f, w)`` becomes a nogood.
* Arbitrary boolean expressions: the expression is evaluated on every
  instance of the (budgeted) feature space and the violating instances are
  added as full-width nogoods. Blunt, but exact.

Construction eagerly checks that at least one instance remains feasible
(UnsatisfiableConstraintsError otherwise), using a backtracking search so the
check does not require enumerating the whole space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import CapacityError, StructuralError, UnsatisfiableConstraintsError
from .expressions import Expr, parse_expression
from .theory import (
    Budgets,
    ClassificationTheory,
    Instance,
    Literal,
    PartialAssignment,
    enumerate_feature_space,
)


@dataclass(frozen=True)
class Implication:
    """``premise -> conclusion`` with disjoint feature sets.

    Any feasible instance extending the premise must extend the conclusion.
    """

    premise: PartialAssignment
    conclusion: PartialAssignment

    def __post_init__(self):
        if not self.conclusion:
            raise StructuralError("implication needs a non-empty conclusion")
        common = set(self.premise.features_assigned()) & set(
            self.conclusion.features_assigned()
        )
        if common:
            name = self.premise.theory.features[min(common)].name
            raise StructuralError(
                f"implication premise and conclusion share feature {name!r}"
            )


def compile_implication(imp: Implication) -> tuple[PartialAssignment, ...]:
    """Turn one implication into the equivalent set of nogoods."""
    theory = imp.premise.theory
    out = []
    for f, v in imp.conclusion.literals:
        for w in range(len(theory.features[f].domain)):
            if w == v:
                continue
            out.append(
                PartialAssignment(theory, imp.premise.literals + (Literal(f, w),))
            )
    return tuple(out)


def nogoods_from_expression(
    theory: ClassificationTheory, expression: str | Expr, budgets: Budgets = Budgets()
) -> tuple[PartialAssignment, ...]:
    """Extensional compilation: every instance falsifying the expression
    becomes a full-width nogood."""
    if isinstance(expression, str):
        expression = parse_expression(theory, expression)
    out = []
    for inst in enumerate_feature_space(theory, budgets):
        if not expression.evaluate(inst.values):
            out.append(inst.as_assignment())
    return tuple(out)


class ConstraintSet:
    """An immutable bag of nogoods over one theory.

    Satisfaction of a partial assignment means no stored nogood is contained
    in it. The empty constraint set is perfectly valid and satisfied by
    everything.
    """

    __slots__ = ("theory", "nogoods", "_feasible_cache")

    def __init__(
        self,
        theory: ClassificationTheory,
        nogoods: Iterable[PartialAssignment] = (),
    ):
        norm = []
        seen = set()
        for ng in nogoods:
            if ng.theory != theory:
                raise StructuralError("nogood built against a different theory")
            if ng.literals in seen:
                continue
            seen.add(ng.literals)
            norm.append(ng)
        # deterministic storage order: shortest first, then canonical literals
        norm.sort(key=lambda ng: (len(ng), ng.literals))
        self.theory = theory
        self.nogoods: tuple[PartialAssignment, ...] = tuple(norm)
        self._feasible_cache: tuple[Instance, ...] | None = None
        if self._first_feasible() is None:
            raise UnsatisfiableConstraintsError(
                "constraint set forbids every instance"
            )

    @classmethod
    def build(
        cls,
        theory: ClassificationTheory,
        nogoods: Iterable[PartialAssignment] = (),
        implications: Iterable[Implication] = (),
        expression: str | Expr | None = None,
        budgets: Budgets = Budgets(),
    ) -> "ConstraintSet":
        """Assemble a constraint set from all three input forms."""
        parts = list(nogoods)
        for imp in implications:
            parts.extend(compile_implication(imp))
        if expression is not None:
            parts.extend(nogoods_from_expression(theory, expression, budgets))
        return cls(theory, parts)

    # ------------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.nogoods)

    def violated_nogood(self, assignment: PartialAssignment) -> PartialAssignment | None:
        """First stored nogood contained in the assignment, or None."""
        for ng in self.nogoods:
            if ng.issubset(assignment):
                return ng
        return None

    def satisfies(self, assignment: PartialAssignment) -> bool:
        return self.violated_nogood(assignment) is None

    def satisfies_instance(self, instance: Instance) -> bool:
        values = instance.values
        for ng in self.nogoods:
            if all(values[f] == v for f, v in ng.literals):
                return False
        return True

    # ------------------------------------------------------------------

    def _first_feasible(self) -> Instance | None:
        """Backtracking search for one feasible instance.

        Assigns features in order and prunes as soon as the partial prefix
        contains a whole nogood, so satisfiability does not need the full
        space. An empty nogood (forbidding everything) makes this fail
        immediately.
        """
        theory = self.theory
        n = theory.n_features
        if any(len(ng) == 0 for ng in self.nogoods):
            return None
        values: list[int] = []

        def violated_by_prefix() -> bool:
            depth = len(values)
            for ng in self.nogoods:
                lits = ng.literals
                if lits and lits[-1].feature < depth:
                    if all(values[f] == v for f, v in lits):
                        return True
            return False

        def search() -> bool:
            if violated_by_prefix():
                return False
            if len(values) == n:
                return True
            for v in range(len(theory.features[len(values)].domain)):
                values.append(v)
                if search():
                    return True
                values.pop()
            return False

        return Instance(theory, values) if search() else None

    def feasible_instances(self, budgets: Budgets = Budgets()) -> tuple[Instance, ...]:
        """All feasible instances, in canonical space order. Cached."""
        if self._feasible_cache is None:
            self._feasible_cache = tuple(
                inst
                for inst in enumerate_feature_space(self.theory, budgets)
                if self.satisfies_instance(inst)
            )
        return self._feasible_cache

    def is_dependency(
        self,
        source: PartialAssignment,
        target: PartialAssignment,
        budgets: Budgets = Budgets(),
    ) -> bool:
        """Dependency test over the feasible space.

        True when both assignments are non-empty, they differ, and every
        feasible instance extending ``source`` also extends ``target``. Note
        that with no nogoods at all this still holds for every proper subset
        relation (a smaller condition is implied by a larger one).
        """
        if not source or not target or source == target:
            return False
        for inst in self.feasible_instances(budgets):
            if inst.extends(source) and not inst.extends(target):
                return False
        return True

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConstraintSet):
            return NotImplemented
        return self.theory == other.theory and tuple(
            ng.literals for ng in self.nogoods
        ) == tuple(ng.literals for ng in other.nogoods)

    def __hash__(self) -> int:
        return hash(tuple(ng.literals for ng in self.nogoods))

    def __repr__(self) -> str:
        return f"ConstraintSet({len(self.nogoods)} nogoods)"


def empty_constraints(theory: ClassificationTheory) -> ConstraintSet:
    return ConstraintSet(theory, ())
