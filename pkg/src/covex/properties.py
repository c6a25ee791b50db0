"""Explainer properties and the expected satisfaction profile.

Seven properties of an explanation listener (the map from each decision to
its set of explanations of one kind):

* success: every decision has at least one explanation.
* non-triviality: the empty assignment never appears as an explanation.
* irreducibility: every literal of every explanation matters, in the sense
  that dropping it leaves a condition met by some differently classified
  instance of the kind's own quantification space (the full feature space
  for the unconstrained kinds, the feasible space for everything else).
* coherence: explanations of differently classified decisions can never hold
  together on one feasible instance.
* consistency: every explanation satisfies the constraint set.
* independence: no explanation set contains a one-directional dependency pair
  (E forces E' on the feasible space but not the other way around).
* non-equivalence: no explanation set contains two distinct members covering
  exactly the same part of the kind's reference space.

``EXPECTED_PROFILE`` records which explanation kinds satisfy which properties
in general (the documented satisfaction profile); ``compute_matrix`` checks a
collection of scenarios against it, returning witnesses for every observed
violation. A profile mismatch means either a bug or a scenario collection too
weak to exhibit a documented violation, and the command line treats it as its
own failure mode.

Property checks that do not apply to a scenario (a dataset kind without a
dataset, irreducibility without a classifier) return None rather than a
report, and the matrix records how many scenarios actually fed each cell.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coverage import InstanceSpace
from .datasets import D_KINDS, DatasetEngine
from .errors import StructuralError
from .exact import KINDS as EXACT_KINDS
from .exact import ExactEngine
from .scenarios import ScenarioBundle
from .theory import Budgets, Instance, PartialAssignment

PROPERTIES = (
    "success",
    "non-triviality",
    "irreducibility",
    "coherence",
    "consistency",
    "independence",
    "non-equivalence",
)

#: Columns of the satisfaction profile, in presentation order. The plain
#: constrained weak kind has no column of its own; probe it individually via
#: the check functions if needed.
MATRIX_KINDS = (
    "waxp",
    "axp",
    "axpc",
    "cpi",
    "mcpi",
    "pcpi",
    "d-cpi",
    "d-mcpi",
    "d-pcpi",
    "d-waxp",
    "d-axp",
)


def _row(spec: str) -> dict[str, bool]:
    cells = spec.split()
    assert len(cells) == len(MATRIX_KINDS)
    return {kind: cell == "+" for kind, cell in zip(MATRIX_KINDS, cells)}


#: Documented satisfaction profile: which kind satisfies which property.
#: Column order matches MATRIX_KINDS.
EXPECTED_PROFILE: dict[str, dict[str, bool]] = {
    #                    waxp axp axpc cpi mcpi pcpi d-cpi d-mcpi d-pcpi d-waxp d-axp
    "success":         _row("+    +   +    +   +    +    +     +      +      +      +"),
    "non-triviality":  _row("+    +   +    +   +    +    +     +      +      +      +"),
    "irreducibility":  _row("x    +   +    x   +    +    x     +      +      x      +"),
    "coherence":       _row("+    +   +    +   +    +    x     x      x      x      x"),
    "consistency":     _row("+    +   +    +   +    +    +     +      +      +      +"),
    "independence":    _row("x    x   x    +   +    +    x     x      +      x      x"),
    "non-equivalence": _row("+    +   x    x   x    +    x     x      +      x      x"),
}


@dataclass
class PropertyReport:
    """Outcome of one property check for one kind on one scenario."""

    property: str
    kind: str
    scenario: str
    satisfied: bool
    witness: dict | None = None


class ScenarioContext:
    """Cached explanation sets and spaces for one scenario.

    The property checks share enumerated explanation sets through this
    object, so checking all properties against all kinds costs one
    enumeration per (kind, decision) pair.
    """

    def __init__(self, bundle: ScenarioBundle, budgets: Budgets = Budgets()):
        self.bundle = bundle
        self.budgets = budgets
        self._exact: ExactEngine | None = None
        self._dengine: DatasetEngine | None = None
        self._feasible: InstanceSpace | None = None
        self._sets: dict[tuple[str, tuple[int, ...]], tuple[PartialAssignment, ...]] = {}

    # -- lazily built machinery ---------------------------------------

    @property
    def exact(self) -> ExactEngine:
        if self._exact is None:
            self._exact = self.bundle.exact_engine(self.budgets)
        return self._exact

    @property
    def dengine(self) -> DatasetEngine:
        if self._dengine is None:
            self._dengine = self.bundle.dataset_engine(self.budgets)
        return self._dengine

    @property
    def feasible_space(self) -> InstanceSpace:
        if self.bundle.classifier is not None:
            return self.exact.feasible_space
        if self._feasible is None:
            self._feasible = self.bundle.feasible_space(self.budgets)
        return self._feasible

    # -- kind plumbing --------------------------------------------------

    def applicable(self, kind: str) -> bool:
        if kind in EXACT_KINDS:
            return self.bundle.classifier is not None
        if kind in D_KINDS:
            return self.bundle.dataset is not None
        raise StructuralError(f"unknown explanation kind {kind!r}")

    def decisions(self, kind: str) -> tuple[Instance, ...]:
        """Instances whose explanation sets the properties quantify over."""
        if kind in D_KINDS:
            return self.dengine.dataset.instances
        return self.feasible_space.instances

    def decision_class(self, kind: str, x: Instance) -> int:
        if kind in D_KINDS:
            return self.dengine.dataset.label_of(x)
        return self.exact.predict(x)

    def explanations(self, kind: str, x: Instance) -> tuple[PartialAssignment, ...]:
        key = (kind, x.values)
        found = self._sets.get(key)
        if found is None:
            if kind in D_KINDS:
                found = self.dengine.enumerate_all_d(kind, x)
            else:
                found = self.exact.enumerate_all(kind, x)
            self._sets[key] = found
        return found

    def reference_space(self, kind: str) -> InstanceSpace:
        """Space in which coverage equivalence for this kind is judged."""
        if kind in D_KINDS:
            return self.dengine.rows_space
        return self.exact.reference_space(kind)


# ----------------------------------------------------------------------
# the seven checks; each returns None when the scenario cannot feed the cell


def check_success(ctx: ScenarioContext, kind: str) -> PropertyReport | None:
    if not ctx.applicable(kind):
        return None
    name = ctx.bundle.name
    for x in ctx.decisions(kind):
        if not ctx.explanations(kind, x):
            return PropertyReport(
                "success", kind, name, False, {"instance": x}
            )
    return PropertyReport("success", kind, name, True)


def check_non_triviality(ctx: ScenarioContext, kind: str) -> PropertyReport | None:
    if not ctx.applicable(kind):
        return None
    name = ctx.bundle.name
    for x in ctx.decisions(kind):
        for e in ctx.explanations(kind, x):
            if not e:
                return PropertyReport(
                    "non-triviality", kind, name, False, {"instance": x}
                )
    return PropertyReport("non-triviality", kind, name, True)


def check_irreducibility(ctx: ScenarioContext, kind: str) -> PropertyReport | None:
    """Each literal must be needed: without it, some instance of a different
    class in the kind's own quantification space satisfies what is left (the
    full feature space for the unconstrained kinds, the feasible space for
    everything else). Needs a classifier total on that space, so dataset-only
    scenarios cannot feed this cell."""
    if not ctx.applicable(kind) or ctx.bundle.classifier is None:
        return None
    name = ctx.bundle.name
    if kind in ("waxp", "axp"):
        space = ctx.exact.full_space
    else:
        space = ctx.exact.feasible_space
    oracle_masks = {}
    for x in ctx.decisions(kind):
        c = ctx.decision_class(kind, x)
        wrong = oracle_masks.get(c)
        if wrong is None:
            wrong = 0
            for pos, inst in enumerate(space.instances):
                if ctx.exact.predict(inst) != c:
                    wrong |= 1 << pos
            oracle_masks[c] = wrong
        for e in ctx.explanations(kind, x):
            for lit in e.literals:
                shrunk = e.without(lit)
                if space.mask_of(shrunk) & wrong == 0:
                    return PropertyReport(
                        "irreducibility",
                        kind,
                        name,
                        False,
                        {"instance": x, "explanation": e, "literal": lit},
                    )
    return PropertyReport("irreducibility", kind, name, True)


def check_coherence(ctx: ScenarioContext, kind: str) -> PropertyReport | None:
    """Explanations of differently classified decisions must never hold
    together on a feasible instance."""
    if not ctx.applicable(kind):
        return None
    name = ctx.bundle.name
    space = ctx.feasible_space
    decisions = ctx.decisions(kind)
    for i, x in enumerate(decisions):
        cx = ctx.decision_class(kind, x)
        for y in decisions[i + 1 :]:
            if ctx.decision_class(kind, y) == cx:
                continue
            for e in ctx.explanations(kind, x):
                for f in ctx.explanations(kind, y):
                    if not e.compatible(f):
                        continue
                    both = space.mask_of(e) & space.mask_of(f)
                    if both:
                        merged = space.members_of_mask(both)[0]
                        return PropertyReport(
                            "coherence",
                            kind,
                            name,
                            False,
                            {
                                "instance": x,
                                "other_instance": y,
                                "explanation": e,
                                "other_explanation": f,
                                "joint_instance": merged,
                            },
                        )
    return PropertyReport("coherence", kind, name, True)


def check_consistency(ctx: ScenarioContext, kind: str) -> PropertyReport | None:
    if not ctx.applicable(kind):
        return None
    name = ctx.bundle.name
    constraints = ctx.bundle.constraints
    if constraints is not None:
        for x in ctx.decisions(kind):
            for e in ctx.explanations(kind, x):
                ng = constraints.violated_nogood(e)
                if ng is not None:
                    return PropertyReport(
                        "consistency",
                        kind,
                        name,
                        False,
                        {"instance": x, "explanation": e, "nogood": ng},
                    )
    return PropertyReport("consistency", kind, name, True)


def check_independence(ctx: ScenarioContext, kind: str) -> PropertyReport | None:
    """No explanation set may contain a pair where one member forces the
    other on the feasible space without being forced back."""
    if not ctx.applicable(kind):
        return None
    name = ctx.bundle.name
    space = ctx.feasible_space

    def forces(a: PartialAssignment, b: PartialAssignment) -> bool:
        if not a or not b or a == b:
            return False
        return space.mask_of(a) & ~space.mask_of(b) == 0

    for x in ctx.decisions(kind):
        explanations = ctx.explanations(kind, x)
        for e in explanations:
            for f in explanations:
                if e == f:
                    continue
                if forces(e, f) and not forces(f, e):
                    return PropertyReport(
                        "independence",
                        kind,
                        name,
                        False,
                        {"instance": x, "explanation": e, "forced": f},
                    )
    return PropertyReport("independence", kind, name, True)


def check_non_equivalence(ctx: ScenarioContext, kind: str) -> PropertyReport | None:
    """No two distinct members of one explanation set may cover exactly the
    same part of the kind's reference space."""
    if not ctx.applicable(kind):
        return None
    name = ctx.bundle.name
    space = ctx.reference_space(kind)
    for x in ctx.decisions(kind):
        explanations = ctx.explanations(kind, x)
        masks = [space.mask_of(e) for e in explanations]
        for i, e in enumerate(explanations):
            for j in range(i + 1, len(explanations)):
                if masks[i] == masks[j]:
                    return PropertyReport(
                        "non-equivalence",
                        kind,
                        name,
                        False,
                        {
                            "instance": x,
                            "explanation": e,
                            "equivalent": explanations[j],
                        },
                    )
    return PropertyReport("non-equivalence", kind, name, True)


CHECKS = {
    "success": check_success,
    "non-triviality": check_non_triviality,
    "irreducibility": check_irreducibility,
    "coherence": check_coherence,
    "consistency": check_consistency,
    "independence": check_independence,
    "non-equivalence": check_non_equivalence,
}


# ----------------------------------------------------------------------
# the matrix


@dataclass
class MatrixResult:
    """Observed profile over a scenario collection, cell by cell."""

    cells: dict[tuple[str, str], bool]
    witnesses: dict[tuple[str, str], PropertyReport]
    fed: dict[tuple[str, str], int]

    def divergences(self) -> list[str]:
        """Human-readable differences from the documented profile."""
        out = []
        for prop in PROPERTIES:
            for kind in MATRIX_KINDS:
                expected = EXPECTED_PROFILE[prop][kind]
                observed = self.cells[(prop, kind)]
                if self.fed[(prop, kind)] == 0:
                    out.append(f"{prop}/{kind}: no scenario could feed this cell")
                    continue
                if observed != expected:
                    if expected:
                        report = self.witnesses[(prop, kind)]
                        out.append(
                            f"{prop}/{kind}: expected satisfied, found violation "
                            f"in scenario {report.scenario!r}: {report.witness}"
                        )
                    else:
                        out.append(
                            f"{prop}/{kind}: expected a violation, none observed"
                        )
        return out

    def matches_expected(self) -> bool:
        return not self.divergences()


def compute_matrix(
    bundles: list[ScenarioBundle], budgets: Budgets = Budgets()
) -> MatrixResult:
    """Check every (property, kind) cell against every scenario.

    A cell is observed satisfied when no scenario violates it; the first
    violation found becomes the cell's witness.
    """
    contexts = [ScenarioContext(b, budgets) for b in bundles]
    cells: dict[tuple[str, str], bool] = {}
    witnesses: dict[tuple[str, str], PropertyReport] = {}
    fed: dict[tuple[str, str], int] = {}
    for prop in PROPERTIES:
        check = CHECKS[prop]
        for kind in MATRIX_KINDS:
            applied = 0
            violation: PropertyReport | None = None
            for ctx in contexts:
                report = check(ctx, kind)
                if report is None:
                    continue
                applied += 1
                if not report.satisfied and violation is None:
                    violation = report
            cells[(prop, kind)] = violation is None
            fed[(prop, kind)] = applied
            if violation is not None:
                witnesses[(prop, kind)] = violation
    return MatrixResult(cells, witnesses, fed)
