"""Finite-domain classification vocabulary and assignment containers.

A classification theory fixes an ordered list of features, each with a finite
domain of at least two values, together with the class tokens a classifier
may emit. Inside the library feature values are always domain *indices*;
value tokens (strings) only appear at the I/O boundary.

The two assignment containers are:

* ``PartialAssignment``: a set of (feature, value) literals with at most one
  literal per feature. Read as the condition "all these literals hold"; an
  instance satisfies it exactly when it extends it. The empty assignment
  holds everywhere.
* ``Instance``: a total assignment, one value per feature.

Literals have a canonical order (feature index, then value index), and
assignments iterate in that order, which keeps every enumeration in the
package deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

from .errors import CapacityError, StructuralError

#: Default cap on exhaustively enumerated instance spaces.
DEFAULT_SPACE_BUDGET = 1 << 24
#: Default cap on the number of literals whose subsets get enumerated.
DEFAULT_SUBSET_BUDGET = 22


@dataclass(frozen=True)
class Budgets:
    """Explicit capacity limits for the exhaustive parts of the library.

    ``space`` bounds the size of any instance space that gets materialized;
    ``subsets`` bounds the number of literals whose power set may be walked.
    Exceeding either raises CapacityError instead of silently grinding.
    """

    space: int = DEFAULT_SPACE_BUDGET
    subsets: int = DEFAULT_SUBSET_BUDGET


class Literal(NamedTuple):
    """One (feature, value) pair, both as indices into the theory."""

    feature: int
    value: int


class Feature(NamedTuple):
    index: int
    name: str
    domain: tuple[str, ...]


class ClassificationTheory:
    """Named features with finite domains, plus the available class tokens."""

    __slots__ = ("features", "classes", "_feature_index", "_class_index", "_hash")

    def __init__(self, features: Iterable[tuple[str, Iterable[str]]], classes: Iterable[str]):
        feats = []
        for idx, (name, domain) in enumerate(features):
            domain = tuple(str(tok) for tok in domain)
            if len(domain) < 2:
                raise StructuralError(f"feature {name!r} needs at least two domain values")
            if len(set(domain)) != len(domain):
                raise StructuralError(f"feature {name!r} has duplicate domain values")
            feats.append(Feature(idx, str(name), domain))
        if not feats:
            raise StructuralError("a theory needs at least one feature")
        names = [f.name for f in feats]
        if len(set(names)) != len(names):
            raise StructuralError("duplicate feature names")
        classes = tuple(str(tok) for tok in classes)
        if len(classes) < 2:
            raise StructuralError("a theory needs at least two classes")
        if len(set(classes)) != len(classes):
            raise StructuralError("duplicate class tokens")
        self.features: tuple[Feature, ...] = tuple(feats)
        self.classes: tuple[str, ...] = classes
        self._feature_index = {f.name: f.index for f in self.features}
        self._class_index = {tok: i for i, tok in enumerate(classes)}
        self._hash = hash((tuple((f.name, f.domain) for f in self.features), classes))

    # ------------------------------------------------------------------
    # lookups

    @property
    def n_features(self) -> int:
        return len(self.features)

    def space_size(self) -> int:
        """Number of instances in the full feature space."""
        size = 1
        for f in self.features:
            size *= len(f.domain)
        return size

    def feature_named(self, name: str) -> Feature:
        try:
            return self.features[self._feature_index[name]]
        except KeyError:
            raise StructuralError(f"unknown feature {name!r}") from None

    def class_index(self, token: str) -> int:
        try:
            return self._class_index[str(token)]
        except KeyError:
            raise StructuralError(f"unknown class {token!r}") from None

    def literal(self, feature_name: str, value_token: str) -> Literal:
        """Build a literal from name and value token, validating both."""
        feat = self.feature_named(feature_name)
        try:
            value = feat.domain.index(str(value_token))
        except ValueError:
            raise StructuralError(
                f"feature {feature_name!r} has no value {value_token!r}"
            ) from None
        return Literal(feat.index, value)

    def check_literal(self, lit: Literal) -> Literal:
        if not 0 <= lit.feature < self.n_features:
            raise StructuralError(f"feature index {lit.feature} out of range")
        if not 0 <= lit.value < len(self.features[lit.feature].domain):
            raise StructuralError(
                f"value index {lit.value} out of range for feature "
                f"{self.features[lit.feature].name!r}"
            )
        return lit

    def render_literal(self, lit: Literal) -> str:
        feat = self.features[lit.feature]
        return f"{feat.name}={feat.domain[lit.value]}"

    # ------------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, ClassificationTheory):
            return NotImplemented
        return (
            self.classes == other.classes
            and tuple((f.name, f.domain) for f in self.features)
            == tuple((f.name, f.domain) for f in other.features)
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        names = ", ".join(f.name for f in self.features)
        return f"ClassificationTheory([{names}], classes={list(self.classes)})"


def _same_theory(a: ClassificationTheory, b: ClassificationTheory) -> bool:
    return a is b or a == b


class PartialAssignment:
    """A set of literals with at most one value per feature.

    Immutable. Iteration yields literals in canonical order. Set-flavoured
    helpers (union, without, difference, issubset) all return new objects.
    """

    __slots__ = ("theory", "literals", "_values", "_hash")

    def __init__(self, theory: ClassificationTheory, literals: Iterable[Literal] = ()):
        values: dict[int, int] = {}
        for lit in literals:
            lit = theory.check_literal(Literal(*lit))
            old = values.get(lit.feature)
            if old is not None and old != lit.value:
                name = theory.features[lit.feature].name
                raise StructuralError(f"two different values for feature {name!r}")
            values[lit.feature] = lit.value
        self.theory = theory
        self.literals: tuple[Literal, ...] = tuple(
            Literal(f, values[f]) for f in sorted(values)
        )
        self._values = values
        self._hash = hash(self.literals)

    # ------------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self) -> Iterator[Literal]:
        return iter(self.literals)

    def __bool__(self) -> bool:
        return bool(self.literals)

    def __contains__(self, lit: Literal) -> bool:
        return self._values.get(lit[0]) == lit[1]

    def value_of(self, feature: int) -> int | None:
        return self._values.get(feature)

    def features_assigned(self) -> tuple[int, ...]:
        return tuple(lit.feature for lit in self.literals)

    # ------------------------------------------------------------------
    # set algebra

    def union(self, other: "PartialAssignment") -> "PartialAssignment":
        """Combine two assignments; conflicting values raise StructuralError."""
        return PartialAssignment(self.theory, self.literals + other.literals)

    def compatible(self, other: "PartialAssignment") -> bool:
        """True when the union would not assign two values to one feature."""
        small, large = (self, other) if len(self) <= len(other) else (other, self)
        for f, v in small.literals:
            w = large._values.get(f)
            if w is not None and w != v:
                return False
        return True

    def without(self, lit: Literal) -> "PartialAssignment":
        if lit not in self:
            raise StructuralError(f"literal {lit} not present")
        return PartialAssignment(
            self.theory, (l for l in self.literals if l != lit)
        )

    def difference(self, other: "PartialAssignment") -> "PartialAssignment":
        return PartialAssignment(
            self.theory, (l for l in self.literals if l not in other)
        )

    def issubset(self, other: "PartialAssignment") -> bool:
        return all(l in other for l in self.literals)

    # ------------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, PartialAssignment):
            return NotImplemented
        return self.literals == other.literals and _same_theory(self.theory, other.theory)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(self.theory.render_literal(l) for l in self.literals)
        return "{" + inner + "}"


class Instance:
    """A total assignment, stored as one value index per feature."""

    __slots__ = ("theory", "values", "_hash")

    def __init__(self, theory: ClassificationTheory, values: Iterable[int]):
        values = tuple(int(v) for v in values)
        if len(values) != theory.n_features:
            raise StructuralError(
                f"instance has {len(values)} values, theory has {theory.n_features} features"
            )
        for f, v in enumerate(values):
            theory.check_literal(Literal(f, v))
        self.theory = theory
        self.values = values
        self._hash = hash(values)

    @classmethod
    def from_tokens(cls, theory: ClassificationTheory, tokens: Iterable[str]) -> "Instance":
        tokens = list(tokens)
        if len(tokens) != theory.n_features:
            raise StructuralError(
                f"instance has {len(tokens)} values, theory has {theory.n_features} features"
            )
        values = []
        for feat, tok in zip(theory.features, tokens):
            tok = str(tok)
            try:
                values.append(feat.domain.index(tok))
            except ValueError:
                raise StructuralError(
                    f"feature {feat.name!r} has no value {tok!r}"
                ) from None
        return cls(theory, values)

    def literal(self, feature: int) -> Literal:
        return Literal(feature, self.values[feature])

    def as_assignment(self) -> PartialAssignment:
        return PartialAssignment(
            self.theory, (Literal(f, v) for f, v in enumerate(self.values))
        )

    def extends(self, assignment: PartialAssignment) -> bool:
        """True iff every literal of the assignment appears in this instance."""
        return all(self.values[f] == v for f, v in assignment.literals)

    def rank(self) -> int:
        """Position of this instance in the mixed-radix enumeration order."""
        r = 0
        for feat, v in zip(self.theory.features, self.values):
            r = r * len(feat.domain) + v
        return r

    def tokens(self) -> tuple[str, ...]:
        return tuple(
            feat.domain[v] for feat, v in zip(self.theory.features, self.values)
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return self.values == other.values and _same_theory(self.theory, other.theory)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(
            f"{feat.name}={feat.domain[v]}"
            for feat, v in zip(self.theory.features, self.values)
        )
        return f"({inner})"


# ----------------------------------------------------------------------
# module-level operations


def extends(assignment: PartialAssignment, instance: Instance) -> bool:
    """True iff the instance carries every literal of the assignment."""
    return instance.extends(assignment)


def unrank_instance(theory: ClassificationTheory, rank: int) -> Instance:
    values = [0] * theory.n_features
    for idx in range(theory.n_features - 1, -1, -1):
        size = len(theory.features[idx].domain)
        rank, values[idx] = divmod(rank, size)
    if rank:
        raise StructuralError("rank out of range")
    return Instance(theory, values)


def enumerate_feature_space(
    theory: ClassificationTheory, budgets: Budgets = Budgets()
) -> Iterator[Instance]:
    """Yield every instance of the full feature space in canonical order.

    Canonical order is lexicographic on value indices, feature 0 most
    significant. Raises CapacityError up front when the space exceeds the
    budget.
    """
    size = theory.space_size()
    if size > budgets.space:
        raise CapacityError("feature space too large to enumerate", size, budgets.space)
    ranges = [range(len(f.domain)) for f in theory.features]
    return (Instance(theory, values) for values in itertools.product(*ranges))


def subassignments(
    assignment: PartialAssignment, budgets: Budgets = Budgets()
) -> Iterator[PartialAssignment]:
    """Yield every subset of an assignment, smallest first.

    Order: ascending cardinality, lexicographic on the canonical literal
    tuple within one cardinality. The empty assignment comes first and the
    full assignment last. Raises CapacityError when the assignment has more
    literals than the subset budget.
    """
    lits = assignment.literals
    if len(lits) > budgets.subsets:
        raise CapacityError(
            "too many literals for subset enumeration", len(lits), budgets.subsets
        )
    theory = assignment.theory
    return (
        PartialAssignment(theory, combo)
        for k in range(len(lits) + 1)
        for combo in itertools.combinations(lits, k)
    )
