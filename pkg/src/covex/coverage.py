"""Instance spaces and coverage bitsets.

An ``InstanceSpace`` fixes an ordered tuple of instances: the full feature
space, its feasible part under some constraint set, or the rows of a dataset.
The coverage of a partial assignment within a space is the set of members
extending it, stored as a bitmask over positions in the space order. Bit i set
means instance i is covered. That makes subsumption and equivalence questions
single integer operations:

* E' subsumes E        <=>  cov(E) is a subset of cov(E')
* E' strictly subsumes <=>  subset and not equal
* E equivalent to E'   <=>  equal coverage
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .constraints import ConstraintSet
from .errors import CapacityError, StructuralError
from .theory import (
    Budgets,
    ClassificationTheory,
    Instance,
    Literal,
    PartialAssignment,
    enumerate_feature_space,
)


class InstanceSpace:
    """An ordered, duplicate-free tuple of instances over one theory."""

    __slots__ = ("theory", "instances", "name", "_index", "_literal_masks", "full_mask")

    def __init__(
        self,
        theory: ClassificationTheory,
        instances: Iterable[Instance],
        name: str = "space",
    ):
        instances = tuple(instances)
        index: dict[tuple[int, ...], int] = {}
        for pos, inst in enumerate(instances):
            if inst.theory != theory:
                raise StructuralError("instance built against a different theory")
            if inst.values in index:
                raise StructuralError(f"duplicate instance {inst!r} in space")
            index[inst.values] = pos
        self.theory = theory
        self.instances = instances
        self.name = name
        self._index = index
        self._literal_masks: dict[Literal, int] = {}
        self.full_mask = (1 << len(instances)) - 1

    @classmethod
    def full(cls, theory: ClassificationTheory, budgets: Budgets = Budgets()) -> "InstanceSpace":
        return cls(theory, enumerate_feature_space(theory, budgets), name="feature space")

    @classmethod
    def feasible(
        cls,
        theory: ClassificationTheory,
        constraints: ConstraintSet | None,
        budgets: Budgets = Budgets(),
    ) -> "InstanceSpace":
        if constraints is None or not len(constraints):
            return cls.full(theory, budgets)
        return cls(theory, constraints.feasible_instances(budgets), name="feasible space")

    # ------------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.instances)

    def index_of(self, instance: Instance) -> int | None:
        return self._index.get(instance.values)

    def __contains__(self, instance: Instance) -> bool:
        return instance.values in self._index

    def literal_mask(self, lit: Literal) -> int:
        """Bitmask of members carrying the literal. Computed once per literal."""
        mask = self._literal_masks.get(lit)
        if mask is None:
            f, v = lit
            mask = 0
            for pos, inst in enumerate(self.instances):
                if inst.values[f] == v:
                    mask |= 1 << pos
            self._literal_masks[lit] = mask
        return mask

    def mask_of(self, assignment: PartialAssignment) -> int:
        """Coverage bitmask of a partial assignment (all bits for the empty one)."""
        mask = self.full_mask
        for lit in assignment:
            mask &= self.literal_mask(lit)
            if not mask:
                break
        return mask

    def members_of_mask(self, mask: int) -> tuple[Instance, ...]:
        return tuple(
            inst for pos, inst in enumerate(self.instances) if mask >> pos & 1
        )

    def __repr__(self) -> str:
        return f"InstanceSpace({self.name}, {len(self.instances)} instances)"


@dataclass(frozen=True)
class Coverage:
    """Coverage of one assignment within one reference space."""

    space: InstanceSpace
    mask: int

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    def members(self) -> tuple[Instance, ...]:
        return self.space.members_of_mask(self.mask)

    def __contains__(self, instance: Instance) -> bool:
        pos = self.space.index_of(instance)
        return pos is not None and bool(self.mask >> pos & 1)

    def __repr__(self) -> str:
        return f"Coverage({self.size}/{len(self.space)})"


def cov(assignment: PartialAssignment, space: InstanceSpace) -> Coverage:
    """Instances of the space extending the assignment."""
    return Coverage(space, space.mask_of(assignment))


def subsumes(
    winner: PartialAssignment, loser: PartialAssignment, space: InstanceSpace
) -> bool:
    """True iff every member covered by ``loser`` is covered by ``winner``."""
    lose = space.mask_of(loser)
    return lose & ~space.mask_of(winner) == 0


def strictly_subsumes(
    winner: PartialAssignment, loser: PartialAssignment, space: InstanceSpace
) -> bool:
    win = space.mask_of(winner)
    lose = space.mask_of(loser)
    return lose & ~win == 0 and win != lose


def equivalent(
    a: PartialAssignment, b: PartialAssignment, space: InstanceSpace
) -> bool:
    return space.mask_of(a) == space.mask_of(b)
