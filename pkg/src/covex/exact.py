"""Exact explanation engine over fully enumerated spaces.

Explanation kinds handled here (the dataset-backed variants live in
``datasets.py``):

* ``waxp``  - weak abductive explanation: a subset of the instance's literals
  whose every total extension in the feature space gets the same class.
* ``axp``   - subset-minimal waxp.
* ``waxpc`` - weak explanation under constraints: quantifies over the feasible
  space only (and must itself be a feasible condition, which subsets of a
  feasible instance always are).
* ``axpc``  - subset-minimal waxpc.
* ``cpi``   - coverage-maximal waxpc: no other waxpc of the decision covers a
  strict superset of its feasible instances.
* ``mcpi``  - subset-minimal cpi.
* ``pcpi``  - one canonical representative (fewest literals, then first in
  canonical literal order) per coverage-equivalence class of mcpis.

Two independent routes are kept deliberately separate so tests can play them
against each other. ``enumerate_all`` applies the defining conditions to every
subset of the instance with coverage bitsets; the ``find_*`` / ``minimize_*``
operations run the oracle-driven searches (deletion passes and the
counterexample worklist) and never look at the enumerations.

All deletion passes try literals in reverse canonical order (highest feature
index first).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .classifiers import Classifier, assert_non_constant
from .constraints import ConstraintSet
from .coverage import Coverage, InstanceSpace, cov
from .errors import (
    ConstantClassifierError,
    ExplanationError,
    InfeasibleInstanceError,
    PreconditionError,
    StructuralError,
)
from .theory import (
    Budgets,
    ClassificationTheory,
    Instance,
    Literal,
    PartialAssignment,
    subassignments,
)

#: Explanation kinds computed by ExactEngine, in presentation order.
KINDS = ("waxp", "axp", "waxpc", "axpc", "cpi", "mcpi", "pcpi")


@dataclass
class ExplanationResult:
    """One explanation plus the bookkeeping of the search that produced it."""

    kind: str
    assignment: PartialAssignment
    coverage: Coverage
    oracle_calls: int
    iterations: int


class EntailmentOracle:
    """Narrow interface the search algorithms run against.

    Both queries quantify over one fixed reference space (the feasible space
    for the constrained kinds). Implementations count their calls in
    ``calls`` so searches can report work done.
    """

    calls: int = 0

    def weak_axpc(self, assignment: PartialAssignment, class_index: int) -> bool:
        """Does every member extending ``assignment`` carry ``class_index``?"""
        raise NotImplementedError

    def implies(self, assignment: PartialAssignment, other: PartialAssignment) -> bool:
        """Does every member extending ``assignment`` extend ``other``?"""
        raise NotImplementedError


class ExhaustiveOracle(EntailmentOracle):
    """Reference oracle: answers by scanning a materialized space."""

    def __init__(self, space: InstanceSpace, labels: tuple[int, ...]):
        if len(labels) != len(space):
            raise StructuralError("one label per space member required")
        self.space = space
        self.labels = labels
        self.calls = 0
        self._class_masks: dict[int, int] = {}

    def class_mask(self, class_index: int) -> int:
        mask = self._class_masks.get(class_index)
        if mask is None:
            mask = 0
            for pos, c in enumerate(self.labels):
                if c == class_index:
                    mask |= 1 << pos
            self._class_masks[class_index] = mask
        return mask

    def weak_axpc(self, assignment: PartialAssignment, class_index: int) -> bool:
        self.calls += 1
        wrong = self.space.full_mask & ~self.class_mask(class_index)
        return self.space.mask_of(assignment) & wrong == 0

    def implies(self, assignment: PartialAssignment, other: PartialAssignment) -> bool:
        self.calls += 1
        return self.space.mask_of(assignment) & ~self.space.mask_of(other) == 0


@dataclass
class _SearchFrame:
    """One node of the counterexample search.

    ``ceiling`` is the candidate set the frame tests and shrinks, ``floor``
    the literals pinned as unremovable so far. ``pending`` (the removable
    literals, snapshotted when the frame is first expanded) and ``cursor``
    drive the iteration.
    """

    ceiling: PartialAssignment
    floor: PartialAssignment
    pending: list[Literal] | None = None
    cursor: int = 0


def _deletion_pass(
    assignment: PartialAssignment, keeps: Callable[[PartialAssignment], bool]
) -> PartialAssignment:
    """Drop literals one at a time (reverse canonical order) while ``keeps``
    stays true on the shrunken assignment."""
    current = assignment
    for lit in reversed(assignment.literals):
        candidate = current.without(lit)
        if keeps(candidate):
            current = candidate
    return current


class ExactEngine:
    """Explanation computations for one (theory, classifier, constraints) triple.

    Spaces are enumerated lazily and cached; the classifier must not be
    constant on a space before that space is used (ConstantClassifierError
    otherwise, since a constant classifier makes the empty assignment explain
    everything).
    """

    def __init__(
        self,
        theory: ClassificationTheory,
        classifier: Classifier,
        constraints: ConstraintSet | None = None,
        budgets: Budgets = Budgets(),
    ):
        if classifier.theory != theory:
            raise StructuralError("classifier built against a different theory")
        if constraints is not None and constraints.theory != theory:
            raise StructuralError("constraints built against a different theory")
        self.theory = theory
        self.classifier = classifier
        self.constraints = constraints
        self.budgets = budgets
        self._full: InstanceSpace | None = None
        self._feasible: InstanceSpace | None = None
        self._oracles: dict[int, ExhaustiveOracle] = {}
        self._non_constant_checked: set[int] = set()
        self._empty = PartialAssignment(theory, ())

    # ------------------------------------------------------------------
    # spaces and oracles

    @property
    def full_space(self) -> InstanceSpace:
        if self._full is None:
            self._full = InstanceSpace.full(self.theory, self.budgets)
        return self._full

    @property
    def feasible_space(self) -> InstanceSpace:
        if self._feasible is None:
            if self.constraints is None or not len(self.constraints):
                self._feasible = self.full_space
            else:
                self._feasible = InstanceSpace.feasible(
                    self.theory, self.constraints, self.budgets
                )
        return self._feasible

    def _oracle(self, space: InstanceSpace) -> ExhaustiveOracle:
        key = id(space)
        oracle = self._oracles.get(key)
        if oracle is None:
            labels = tuple(self.classifier.predict(inst) for inst in space.instances)
            oracle = ExhaustiveOracle(space, labels)
            self._oracles[key] = oracle
        return oracle

    def _require_non_constant(self, space: InstanceSpace) -> None:
        if id(space) in self._non_constant_checked:
            return
        assert_non_constant(self.classifier, space.instances)
        self._non_constant_checked.add(id(space))

    def reference_space(self, kind: str) -> InstanceSpace:
        """Space an explanation of this kind quantifies over (and is scored
        against for coverage)."""
        return self.full_space if kind in ("waxp", "axp") else self.feasible_space

    def predict(self, x: Instance) -> int:
        return self.classifier.predict(x)

    # ------------------------------------------------------------------
    # preconditions

    def require_feasible(self, x: Instance) -> None:
        if self.constraints is None:
            return
        ng = self.constraints.violated_nogood(x.as_assignment())
        if ng is not None:
            raise InfeasibleInstanceError(
                f"instance {x!r} violates nogood {ng!r}", nogood=ng
            )

    def _require_inside(self, e: PartialAssignment, x: Instance) -> None:
        if not x.extends(e):
            raise PreconditionError("assignment is not part of the instance")

    # ------------------------------------------------------------------
    # weak tests and deletion searches

    def is_waxp(self, x: Instance, e: PartialAssignment) -> bool:
        """Weak explanation test over the full feature space."""
        self._require_inside(e, x)
        self._require_non_constant(self.full_space)
        return self._oracle(self.full_space).weak_axpc(e, self.predict(x))

    def find_axp(self, x: Instance) -> ExplanationResult:
        """Subset-minimal weak explanation, by a deletion pass over F."""
        space = self.full_space
        self._require_non_constant(space)
        oracle = self._oracle(space)
        c = self.predict(x)
        start = oracle.calls
        result = _deletion_pass(x.as_assignment(), lambda e: oracle.weak_axpc(e, c))
        return ExplanationResult(
            "axp", result, cov(result, space), oracle.calls - start, self.theory.n_features
        )

    def is_waxpc(self, x: Instance, e: PartialAssignment) -> bool:
        """Weak constrained explanation test over the feasible space.

        Subsets of a feasible instance satisfy the constraints automatically
        (nogood containment is anti-monotone), so the only real work is the
        class question.
        """
        self._require_inside(e, x)
        self.require_feasible(x)
        self._require_non_constant(self.feasible_space)
        return self._oracle(self.feasible_space).weak_axpc(e, self.predict(x))

    def find_axpc(self, x: Instance) -> ExplanationResult:
        """Subset-minimal weak constrained explanation (deletion pass over F[C])."""
        self.require_feasible(x)
        space = self.feasible_space
        self._require_non_constant(space)
        oracle = self._oracle(space)
        c = self.predict(x)
        start = oracle.calls
        result = _deletion_pass(x.as_assignment(), lambda e: oracle.weak_axpc(e, c))
        return ExplanationResult(
            "axpc", result, cov(result, space), oracle.calls - start, self.theory.n_features
        )

    # ------------------------------------------------------------------
    # coverage-maximal explanations

    def closure_literals(self, x: Instance, e: PartialAssignment) -> PartialAssignment:
        """Literals of x forced on every feasible instance covered by e.

        Always contains e itself; the counterexample search never needs to
        look outside this set.
        """
        self._require_inside(e, x)
        self.require_feasible(x)
        oracle = self._oracle(self.feasible_space)
        out = list(e.literals)
        for f in range(self.theory.n_features):
            lit = x.literal(f)
            if lit in e:
                continue
            if oracle.implies(e, PartialAssignment(self.theory, (lit,))):
                out.append(lit)
        return PartialAssignment(self.theory, out)

    def _counterexample_search(
        self,
        e: PartialAssignment,
        floor: PartialAssignment,
        ceiling: PartialAssignment,
        class_index: int,
    ) -> PartialAssignment | None:
        """Worklist search for a weak constrained explanation strictly
        subsuming e, between a pinned floor and a shrinking ceiling.

        Each frame first asks whether anything below its ceiling can still
        explain the class (no subset of a failing ceiling can), then whether
        the ceiling already covers strictly more than e, and only then starts
        dropping removable literals one at a time, pinning each literal whose
        removal led nowhere. Frames visit candidates in exactly the order a
        direct recursion would.
        """
        oracle = self._oracle(self.feasible_space)
        stack = [_SearchFrame(ceiling, floor)]
        returning = False
        while stack:
            frame = stack[-1]
            if not returning:
                if not oracle.weak_axpc(frame.ceiling, class_index):
                    stack.pop()
                    returning = True
                    continue
                if not oracle.implies(frame.ceiling, e):
                    return frame.ceiling
                frame.pending = [l for l in frame.ceiling if l not in frame.floor]
            else:
                dropped = frame.pending[frame.cursor]
                frame.floor = PartialAssignment(
                    self.theory, frame.floor.literals + (dropped,)
                )
                frame.cursor += 1
                returning = False
            if frame.cursor >= len(frame.pending):
                stack.pop()
                returning = True
                continue
            lit = frame.pending[frame.cursor]
            stack.append(_SearchFrame(frame.ceiling.without(lit), frame.floor))
        return None

    def cpi_counterexample(
        self,
        x: Instance,
        e: PartialAssignment,
        floor: PartialAssignment | None = None,
        ceiling: PartialAssignment | None = None,
    ) -> PartialAssignment | None:
        """Find a weak constrained explanation of x's decision that covers a
        strict superset of e's feasible coverage, or None if there is none.

        e must be a weak constrained explanation of the decision. When given,
        ``ceiling`` must consist of literals of x forced by e (the default is
        exactly that closure) and ``floor`` must be contained in it.
        """
        self._require_inside(e, x)
        self.require_feasible(x)
        space = self.feasible_space
        self._require_non_constant(space)
        c = self.predict(x)
        oracle = self._oracle(space)
        wrong = space.full_mask & ~oracle.class_mask(c)
        if space.mask_of(e) & wrong:
            raise PreconditionError("assignment is not a weak constrained explanation")
        if ceiling is None:
            ceiling = self.closure_literals(x, e)
        else:
            self._require_inside(ceiling, x)
            if space.mask_of(e) & ~space.mask_of(ceiling):
                raise PreconditionError("ceiling literals must be forced by the assignment")
        if floor is None:
            floor = self._empty
        elif not floor.issubset(ceiling):
            raise PreconditionError("floor must be contained in the ceiling")
        return self._counterexample_search(e, floor, ceiling, c)

    def find_cpi_xp(self, x: Instance) -> ExplanationResult:
        """Coverage-maximal weak constrained explanation of x's decision.

        Starts from the instance itself (always a weak explanation of its own
        decision) and repeatedly swaps in a counterexample with strictly
        larger coverage until none exists. The closure shrinks strictly each
        round, so the loop runs at most n times.
        """
        self.require_feasible(x)
        space = self.feasible_space
        self._require_non_constant(space)
        c = self.predict(x)
        oracle = self._oracle(space)
        start = oracle.calls
        e = x.as_assignment()
        iterations = 0
        while True:
            iterations += 1
            if iterations > self.theory.n_features + 1:
                raise ExplanationError(
                    "internal invariant broken: counterexample loop exceeded its bound"
                )
            ceiling = self.closure_literals(x, e)
            counter = self._counterexample_search(e, self._empty, ceiling, c)
            if counter is None:
                break
            e = counter
        return ExplanationResult(
            "cpi", e, cov(e, space), oracle.calls - start, iterations
        )

    def minimize_cpi(self, x: Instance, e: PartialAssignment) -> ExplanationResult:
        """Shrink a coverage-maximal explanation to a subset-minimal one.

        Drops a literal only when the rest still explains the class and still
        covers everything it covered before (two oracle calls per literal at
        most), so coverage never changes along the way.
        """
        self._require_inside(e, x)
        self.require_feasible(x)
        space = self.feasible_space
        self._require_non_constant(space)
        oracle = self._oracle(space)
        c = self.predict(x)
        start = oracle.calls
        current = e
        for lit in reversed(e.literals):
            candidate = current.without(lit)
            if oracle.weak_axpc(candidate, c) and oracle.implies(candidate, current):
                current = candidate
        return ExplanationResult(
            "mcpi", current, cov(current, space), oracle.calls - start, len(e)
        )

    def find_pcpi_xp(self, x: Instance) -> ExplanationResult:
        """Canonical representative of one maximal-coverage equivalence class.

        Minimizing a coverage-maximal explanation lands somewhere in its
        equivalence class, not necessarily on the canonical member, so the
        result is canonicalized: every equivalent explanation lies inside the
        closure of the minimized one and every weak explanation inside that
        closure is equivalent to it, hence the first acceptable subset in
        (cardinality, canonical) order is exactly the representative.
        """
        space = self.feasible_space
        oracle = self._oracle(space)
        start = oracle.calls
        found = self.find_cpi_xp(x)
        minimal = self.minimize_cpi(x, found.assignment)
        ceiling = self.closure_literals(x, minimal.assignment)
        c = self.predict(x)
        for s in subassignments(ceiling, self.budgets):
            if not s:
                continue
            if oracle.weak_axpc(s, c):
                return ExplanationResult(
                    "pcpi", s, cov(s, space), oracle.calls - start, found.iterations
                )
        raise ExplanationError("internal invariant broken: no representative found")

    def is_cpi_xp(self, x: Instance, e: PartialAssignment) -> bool:
        """Convenience test: weak constrained explanation with maximal coverage."""
        self._require_inside(e, x)
        self.require_feasible(x)
        space = self.feasible_space
        self._require_non_constant(space)
        oracle = self._oracle(space)
        if not oracle.weak_axpc(e, self.predict(x)):
            return False
        return self.cpi_counterexample(x, e) is None

    # ------------------------------------------------------------------
    # definitional enumeration

    def enumerate_all(self, kind: str, x: Instance) -> tuple[PartialAssignment, ...]:
        """Every explanation of the given kind for x's decision, by direct
        application of the definitions to each subset of the instance.

        Results come back in subset-enumeration order (ascending cardinality,
        canonical literal order within one cardinality).
        """
        if kind not in KINDS:
            raise StructuralError(f"unknown exact explanation kind {kind!r}")
        c = self.predict(x)
        candidates = list(subassignments(x.as_assignment(), self.budgets))

        if kind in ("waxp", "axp"):
            space = self.full_space
            self._require_non_constant(space)
            wrong = space.full_mask & ~self._oracle(space).class_mask(c)
            weak = [e for e in candidates if space.mask_of(e) & wrong == 0]
            if kind == "waxp":
                return tuple(weak)
            return tuple(_minimal_members(weak))

        self.require_feasible(x)
        space = self.feasible_space
        self._require_non_constant(space)
        wrong = space.full_mask & ~self._oracle(space).class_mask(c)
        # subsets of a feasible instance satisfy the constraints automatically
        weak = [e for e in candidates if space.mask_of(e) & wrong == 0]
        if kind == "waxpc":
            return tuple(weak)
        if kind == "axpc":
            return tuple(_minimal_members(weak))

        masks = [space.mask_of(e) for e in weak]
        cpis = [
            e
            for e, m in zip(weak, masks)
            if not any(m & ~other == 0 and m != other for other in masks)
        ]
        if kind == "cpi":
            return tuple(cpis)
        mcpis = _minimal_members(cpis)
        if kind == "mcpi":
            return tuple(mcpis)
        # one representative per coverage class; enumeration order makes the
        # first member of each class the canonical one
        seen: set[int] = set()
        reps = []
        for e in mcpis:
            m = space.mask_of(e)
            if m not in seen:
                seen.add(m)
                reps.append(e)
        return tuple(reps)


def _minimal_members(family: Iterable[PartialAssignment]) -> list[PartialAssignment]:
    """Members with no proper subset inside the same family."""
    family = list(family)
    out = []
    for e in family:
        if not any(o is not e and len(o) < len(e) and o.issubset(e) for o in family):
            out.append(e)
    return out
