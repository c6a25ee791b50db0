"""Instance spaces, coverage bitsets, subsumption."""

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import binary_theory, inst, pa
from covex.constraints import ConstraintSet
from covex.coverage import (
    Coverage,
    InstanceSpace,
    cov,
    equivalent,
    strictly_subsumes,
    subsumes,
)
from covex.errors import StructuralError
from covex.theory import (
    Budgets,
    PartialAssignment,
    enumerate_feature_space,
)

THEORY = binary_theory(3)


def test_full_space_matches_enumeration():
    space = InstanceSpace.full(THEORY)
    assert len(space) == 8
    assert list(space.instances) == list(enumerate_feature_space(THEORY))
    for pos, x in enumerate(space.instances):
        assert space.index_of(x) == pos
        assert x in space
    assert inst(binary_theory(2), "f1=0,f2=0") not in space


def test_feasible_space_filters_and_empty_falls_back():
    c = ConstraintSet(THEORY, [pa(THEORY, "f1=1,f2=0")])
    space = InstanceSpace.feasible(THEORY, c)
    assert len(space) == 6
    assert all(c.satisfies_instance(x) for x in space.instances)
    unconstrained = InstanceSpace.feasible(THEORY, None)
    assert list(unconstrained.instances) == list(InstanceSpace.full(THEORY).instances)


def test_space_rejects_duplicates():
    x = inst(THEORY, "f1=0,f2=0,f3=0")
    with pytest.raises(StructuralError):
        InstanceSpace(THEORY, [x, x])


def test_masks_against_direct_membership():
    space = InstanceSpace.full(THEORY)
    e = pa(THEORY, "f1=1,f3=0")
    mask = space.mask_of(e)
    for pos, x in enumerate(space.instances):
        assert bool(mask >> pos & 1) == x.extends(e)
    assert space.mask_of(pa(THEORY, "")) == space.full_mask


def test_members_of_mask_round_trip():
    space = InstanceSpace.full(THEORY)
    e = pa(THEORY, "f2=1")
    members = space.members_of_mask(space.mask_of(e))
    assert members == tuple(x for x in space.instances if x.extends(e))


def test_coverage_size_and_membership():
    space = InstanceSpace.full(THEORY)
    c = cov(pa(THEORY, "f1=1"), space)
    assert isinstance(c, Coverage)
    assert c.size == 4
    assert inst(THEORY, "f1=1,f2=0,f3=1") in c
    assert inst(THEORY, "f1=0,f2=0,f3=1") not in c
    assert len(c.members()) == 4


def test_subsumption_in_full_space_is_literal_containment():
    space = InstanceSpace.full(THEORY)
    smaller = pa(THEORY, "f1=1,f2=0")
    larger = pa(THEORY, "f1=1")
    assert subsumes(larger, smaller, space)
    assert strictly_subsumes(larger, smaller, space)
    assert not subsumes(smaller, larger, space)
    assert subsumes(larger, larger, space)
    assert not strictly_subsumes(larger, larger, space)
    assert equivalent(larger, larger, space)
    assert not equivalent(larger, smaller, space)


def test_constraints_can_make_distinct_assignments_equivalent():
    # lock f1 and f2 to equal values
    c = ConstraintSet(THEORY, [pa(THEORY, "f1=0,f2=1"), pa(THEORY, "f1=1,f2=0")])
    space = InstanceSpace.feasible(THEORY, c)
    assert equivalent(pa(THEORY, "f1=1"), pa(THEORY, "f2=1"), space)
    assert subsumes(pa(THEORY, "f1=1"), pa(THEORY, "f2=1"), space)
    assert not strictly_subsumes(pa(THEORY, "f1=1"), pa(THEORY, "f2=1"), space)
    assert strictly_subsumes(pa(THEORY, "f1=1"), pa(THEORY, "f1=1,f3=0"), space)


def test_space_budget_applies_to_full_construction():
    from covex.errors import CapacityError

    with pytest.raises(CapacityError):
        InstanceSpace.full(THEORY, Budgets(space=4))


@given(st.integers(0, 10_000))
def test_mask_intersection_is_union_of_literals(seed):
    rng = random.Random(seed)
    space = InstanceSpace.full(THEORY)
    feats = rng.sample(range(3), rng.randint(0, 3))
    e = PartialAssignment(THEORY, [(f, rng.randint(0, 1)) for f in feats])
    expected = space.full_mask
    for lit in e.literals:
        expected &= space.literal_mask(lit)
    assert space.mask_of(e) == expected
