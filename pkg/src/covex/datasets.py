"""Dataset-backed explanation engine.

Here the ground truth is a finite labeled sample T instead of a classifier
over the whole feature space. A weak explanation of a row's decision must
keep every row it covers in the decision's class; the d-variants of the
coverage-maximal kinds compare coverage over the rows of T only.

Because rows are validated against the constraint set at ingest and nogood
containment is anti-monotone, subsets of a row are always feasible
conditions, which is why there is no separate constrained variant of the
dataset kinds: the plain d-test and the constrained one coincide.

Dataset coverage in the closure machinery below is filtered by the decision's
class (cov keeps only rows labeled like the explained row). For the sets the
machinery is ever applied to, weak explanations of that decision, the filter
changes nothing, since every covered row of a weak explanation carries the
decision's class anyway. Both facts are exercised in the test suite.

The engine keeps two independent routes, mirroring ``exact.py``:
``enumerate_all_d`` applies the definitions to every subset of the row with
coverage bitsets, while the ``find_*`` operations run candidate-based
searches built on one elementary test (is this set a weak explanation), with
a packed-bits fast path when the theory has at most 64 features.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .coverage import InstanceSpace, cov
from .constraints import ConstraintSet
from .errors import (
    ExplanationError,
    InfeasibleInstanceError,
    PreconditionError,
    StructuralError,
)
from .exact import ExplanationResult, _minimal_members
from .theory import (
    Budgets,
    ClassificationTheory,
    Instance,
    Literal,
    PartialAssignment,
    subassignments,
)

#: Dataset explanation kinds, in presentation order.
D_KINDS = ("d-waxp", "d-axp", "d-cpi", "d-mcpi", "d-pcpi")


class Dataset:
    """An immutable labeled sample over one theory.

    Rows are unique (exact duplicates collapse to their first occurrence;
    duplicates with conflicting labels are an error), every class of the
    theory must occur, and when a constraint set is given every row must
    satisfy it.
    """

    def __init__(
        self,
        theory: ClassificationTheory,
        instances: Sequence[Instance],
        labels: Sequence[int],
    ):
        if len(instances) != len(labels):
            raise StructuralError("one label per row required")
        if not instances:
            raise StructuralError("dataset has no rows")
        for c in labels:
            if not 0 <= int(c) < len(theory.classes):
                raise StructuralError(f"class index {c} out of range")
        index: dict[tuple[int, ...], int] = {}
        for pos, inst in enumerate(instances):
            if inst.theory != theory:
                raise StructuralError("row built against a different theory")
            if inst.values in index:
                raise StructuralError(f"duplicate row {inst!r}")
            index[inst.values] = pos
        missing = set(range(len(theory.classes))) - {int(c) for c in labels}
        if missing:
            names = ", ".join(theory.classes[c] for c in sorted(missing))
            raise StructuralError(f"dataset has no row of class {names}")
        self.theory = theory
        self.instances = tuple(instances)
        self.rows = np.array([inst.values for inst in instances], dtype=np.int16)
        self.labels = np.array([int(c) for c in labels], dtype=np.int16)
        self._index = index

    @classmethod
    def from_rows(
        cls,
        theory: ClassificationTheory,
        value_rows: Iterable[Sequence[int]],
        labels: Iterable[int],
        constraints: ConstraintSet | None = None,
    ) -> "Dataset":
        """Build from raw value-index rows, validating and collapsing.

        Row numbers in error messages are 1-based positions in the input,
        before duplicate collapsing.
        """
        value_rows = [tuple(int(v) for v in row) for row in value_rows]
        labels = [int(c) for c in labels]
        if len(value_rows) != len(labels):
            raise StructuralError("one label per row required")
        kept_instances: list[Instance] = []
        kept_labels: list[int] = []
        first_seen: dict[tuple[int, ...], tuple[int, int]] = {}
        for num, (row, c) in enumerate(zip(value_rows, labels), start=1):
            inst = Instance(theory, row)
            if constraints is not None:
                ng = constraints.violated_nogood(inst.as_assignment())
                if ng is not None:
                    raise InfeasibleInstanceError(
                        f"dataset row {num} ({inst!r}) violates nogood {ng!r}",
                        nogood=ng,
                    )
            if inst.values in first_seen:
                prev_num, prev_c = first_seen[inst.values]
                if prev_c != c:
                    raise StructuralError(
                        f"rows {prev_num} and {num} repeat {inst!r} with different classes"
                    )
                continue
            first_seen[inst.values] = (num, c)
            kept_instances.append(inst)
            kept_labels.append(c)
        return cls(theory, kept_instances, kept_labels)

    # ------------------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.instances)

    def row_of(self, instance: Instance) -> int | None:
        return self._index.get(instance.values)

    def label_of(self, instance: Instance) -> int:
        pos = self.row_of(instance)
        if pos is None:
            raise InfeasibleInstanceError(f"instance {instance!r} is not in the dataset")
        return int(self.labels[pos])

    def __repr__(self) -> str:
        return f"Dataset({self.m} rows, {self.theory.n_features} features)"


class DatasetEngine:
    """Explanation computations against one dataset."""

    def __init__(self, dataset: Dataset, budgets: Budgets = Budgets()):
        self.dataset = dataset
        self.theory = dataset.theory
        self.budgets = budgets
        self.tests = 0  # elementary weak-explanation tests performed
        self._rows_space: InstanceSpace | None = None
        self._x_cache: dict[tuple[int, ...], tuple[np.ndarray, np.ndarray, int]] = {}
        # features above this count fall back to the generic per-candidate
        # route; tests lower it to cross-check the two implementations
        self._pack_limit = 64

    @property
    def rows_space(self) -> InstanceSpace:
        """The dataset's rows as a coverage reference space."""
        if self._rows_space is None:
            self._rows_space = InstanceSpace(
                self.theory, self.dataset.instances, name="dataset rows"
            )
        return self._rows_space

    # ------------------------------------------------------------------
    # plumbing

    def _require_row(self, x: Instance) -> int:
        pos = self.dataset.row_of(x)
        if pos is None:
            raise InfeasibleInstanceError(f"instance {x!r} is not in the dataset")
        return pos

    def _require_inside(self, e: PartialAssignment, x: Instance) -> None:
        if not x.extends(e):
            raise PreconditionError("assignment is not part of the instance")

    def _extending(self, e: PartialAssignment) -> np.ndarray:
        """Boolean row mask of dataset rows extending the assignment."""
        rows = self.dataset.rows
        mask = np.ones(self.dataset.m, dtype=bool)
        for f, v in e.literals:
            mask &= rows[:, f] == v
        return mask

    def _packed(self, x: Instance) -> tuple[np.ndarray, np.ndarray, int]:
        """Per-row agreement bitmasks with x, split by the decision's class.

        Returns (agree, wrong, c): agree[i] has bit f set when row i matches
        x on feature f; wrong is agree restricted to rows not labeled c.
        """
        cached = self._x_cache.get(x.values)
        if cached is not None:
            return cached
        c = self.dataset.label_of(x)
        agree = self.dataset.rows == np.array(x.values, dtype=np.int16)
        weights = np.uint64(1) << np.arange(self.theory.n_features, dtype=np.uint64)
        bits = agree.astype(np.uint64) @ weights
        wrong = bits[np.asarray(self.dataset.labels != c)]
        out = (bits, wrong, c)
        self._x_cache[x.values] = out
        return out

    @staticmethod
    def _feature_bits(e: PartialAssignment) -> np.uint64:
        mask = 0
        for f, _ in e.literals:
            mask |= 1 << f
        return np.uint64(mask)

    def _assignment_from_bits(self, bits: int, x: Instance) -> PartialAssignment:
        lits = [
            x.literal(f)
            for f in range(self.theory.n_features)
            if bits >> f & 1
        ]
        return PartialAssignment(self.theory, lits)

    # ------------------------------------------------------------------
    # elementary test and deletion search

    def is_d_waxp(self, x: Instance, e: PartialAssignment) -> bool:
        """True iff every dataset row extending e carries x's label."""
        self._require_inside(e, x)
        self.tests += 1
        if self.theory.n_features <= self._pack_limit:
            _, wrong, _ = self._packed(x)
            emask = self._feature_bits(e)
            return not bool(((wrong & emask) == emask).any())
        c = self.dataset.label_of(x)
        ext = self._extending(e)
        return bool((self.dataset.labels[ext] == c).all())

    def find_d_axp(self, x: Instance) -> ExplanationResult:
        """Subset-minimal weak dataset explanation, by a deletion pass."""
        self._require_row(x)
        start = self.tests
        current = x.as_assignment()
        for lit in reversed(current.literals):
            candidate = current.without(lit)
            if self.is_d_waxp(x, candidate):
                current = candidate
        return ExplanationResult(
            "d-axp",
            current,
            cov(current, self.rows_space),
            self.tests - start,
            self.theory.n_features,
        )

    # ------------------------------------------------------------------
    # closure machinery

    def _cov_rows(self, x: Instance, e: PartialAssignment) -> np.ndarray:
        """Class-filtered coverage: rows extending e that carry x's label."""
        c = self.dataset.label_of(x)
        return self._extending(e) & np.asarray(self.dataset.labels == c)

    def d_closure(self, x: Instance, e: PartialAssignment) -> PartialAssignment:
        """Literals of x shared by every covered row (class-filtered coverage).

        Since x itself is covered, these are exactly the literals forced on
        the coverage, and every weak explanation equivalent to e lives inside
        this set.
        """
        self._require_inside(e, x)
        self._require_row(x)
        covered = self.dataset.rows[self._cov_rows(x, e)]
        shared = (covered == np.array(x.values, dtype=np.int16)).all(axis=0)
        lits = [x.literal(f) for f in np.flatnonzero(shared)]
        return PartialAssignment(self.theory, lits)

    def s_set(self, x: Instance, e: PartialAssignment, y: Instance) -> PartialAssignment:
        """The candidate replacement built from an uncovered row y: the part
        of the closure of e that y agrees with."""
        closure = self.d_closure(x, e)
        lits = [lit for lit in closure if y.values[lit.feature] == lit.value]
        return PartialAssignment(self.theory, lits)

    def _d_counterexample(self, x: Instance, e: PartialAssignment) -> PartialAssignment | None:
        """First weak dataset explanation strictly subsuming e, or None.

        Only candidates of the form s_set(x, e, y) for uncovered rows y need
        checking: any strict subsumer E' covers such a y, and then s_set for
        that y is itself a weak explanation covering y. Rows are tried in
        dataset order; rows of other classes can never yield a weak
        explanation (they would cover themselves), so they are skipped.
        """
        if self.theory.n_features <= self._pack_limit:
            return self._d_counterexample_packed(x, e)
        return self._d_counterexample_generic(x, e)

    def _d_counterexample_packed(self, x: Instance, e: PartialAssignment) -> PartialAssignment | None:
        agree, wrong, c = self._packed(x)
        covered = self._cov_rows(x, e)
        same_class = np.asarray(self.dataset.labels == c)
        closure_bits = self._feature_bits(self.d_closure(x, e))
        seen: set[int] = set()
        for i in np.flatnonzero(same_class & ~covered):
            smask = agree[i] & closure_bits
            key = int(smask)
            if key in seen:
                continue
            seen.add(key)
            if key == 0:
                continue
            self.tests += 1
            if not bool(((wrong & smask) == smask).any()):
                return self._assignment_from_bits(key, x)
        return None

    def _d_counterexample_generic(self, x: Instance, e: PartialAssignment) -> PartialAssignment | None:
        c = self.dataset.label_of(x)
        covered = self._cov_rows(x, e)
        closure = self.d_closure(x, e)
        seen: set[tuple[Literal, ...]] = set()
        for i in np.flatnonzero(np.asarray(self.dataset.labels == c) & ~covered):
            y = self.dataset.instances[i]
            s = PartialAssignment(
                self.theory,
                (lit for lit in closure if y.values[lit.feature] == lit.value),
            )
            if s.literals in seen:
                continue
            seen.add(s.literals)
            if not s:
                continue
            self.tests += 1
            ext = self._extending(s)
            if bool((self.dataset.labels[ext] == c).all()):
                return s
        return None

    # ------------------------------------------------------------------
    # coverage-maximal kinds

    def is_d_cpi_xp(self, x: Instance, e: PartialAssignment) -> bool:
        """Weak dataset explanation no other weak one strictly subsumes."""
        self._require_inside(e, x)
        self._require_row(x)
        if not self.is_d_waxp(x, e):
            return False
        return self._d_counterexample(x, e) is None

    def find_d_cpi_xp(self, x: Instance) -> ExplanationResult:
        """Coverage-maximal weak dataset explanation of a row's decision.

        Same loop shape as the exact engine: start from the row itself and
        swap in counterexamples until none is left. The closure shrinks
        strictly each round, so at most n iterations happen.
        """
        self._require_row(x)
        start = self.tests
        e = x.as_assignment()
        iterations = 0
        while True:
            iterations += 1
            if iterations > self.theory.n_features + 1:
                raise ExplanationError(
                    "internal invariant broken: counterexample loop exceeded its bound"
                )
            counter = self._d_counterexample(x, e)
            if counter is None:
                break
            e = counter
        return ExplanationResult(
            "d-cpi", e, cov(e, self.rows_space), self.tests - start, iterations
        )

    def minimize_d_cpi(self, x: Instance, e: PartialAssignment) -> ExplanationResult:
        """Shrink a coverage-maximal explanation to a subset-minimal one.

        A subset of e that stays weak covers at least what e covers, and more
        than that would contradict e being coverage-maximal, so the deletion
        pass needs no separate coverage check (at most n tests total).
        """
        self._require_inside(e, x)
        self._require_row(x)
        start = self.tests
        current = e
        for lit in reversed(e.literals):
            candidate = current.without(lit)
            if self.is_d_waxp(x, candidate):
                current = candidate
        return ExplanationResult(
            "d-mcpi", current, cov(current, self.rows_space), self.tests - start, len(e)
        )

    def find_d_pcpi(self, x: Instance) -> ExplanationResult:
        """Canonical representative of the reached coverage class.

        Minimization lands somewhere inside the class; the representative is
        recovered by scanning subsets of the closure of the minimized result
        in (cardinality, canonical) order for the first weak explanation,
        which is equivalent by the same closure argument as the exact engine.
        """
        start = self.tests
        found = self.find_d_cpi_xp(x)
        minimal = self.minimize_d_cpi(x, found.assignment)
        ceiling = self.d_closure(x, minimal.assignment)
        for s in subassignments(ceiling, self.budgets):
            if not s:
                continue
            if self.is_d_waxp(x, s):
                return ExplanationResult(
                    "d-pcpi", s, cov(s, self.rows_space), self.tests - start, found.iterations
                )
        raise ExplanationError("internal invariant broken: no representative found")

    # ------------------------------------------------------------------
    # definitional enumeration

    def enumerate_all_d(self, kind: str, x: Instance) -> tuple[PartialAssignment, ...]:
        """Every explanation of the given dataset kind for a row's decision,
        by direct application of the definitions to each subset of the row.

        Coverage comparisons use bitsets over the dataset rows. Results come
        back in subset-enumeration order.
        """
        if kind not in D_KINDS:
            raise StructuralError(f"unknown dataset explanation kind {kind!r}")
        pos = self._require_row(x)
        c = int(self.dataset.labels[pos])
        space = self.rows_space
        wrong = 0
        for i, label in enumerate(self.dataset.labels):
            if int(label) != c:
                wrong |= 1 << i
        candidates = list(subassignments(x.as_assignment(), self.budgets))
        weak = [e for e in candidates if space.mask_of(e) & wrong == 0]
        if kind == "d-waxp":
            return tuple(weak)
        if kind == "d-axp":
            return tuple(_minimal_members(weak))
        masks = [space.mask_of(e) for e in weak]
        cpis = [
            e
            for e, m in zip(weak, masks)
            if not any(m & ~other == 0 and m != other for other in masks)
        ]
        if kind == "d-cpi":
            return tuple(cpis)
        mcpis = _minimal_members(cpis)
        if kind == "d-mcpi":
            return tuple(mcpis)
        seen: set[int] = set()
        reps = []
        for e in mcpis:
            m = space.mask_of(e)
            if m not in seen:
                seen.add(m)
                reps.append(e)
        return tuple(reps)
