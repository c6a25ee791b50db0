"""Theories, literals, partial assignments, instances, subset enumeration."""

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import binary_theory, inst, pa
from covex.errors import CapacityError, StructuralError
from covex.theory import (
    Budgets,
    ClassificationTheory,
    Instance,
    Literal,
    PartialAssignment,
    enumerate_feature_space,
    extends,
    subassignments,
    unrank_instance,
)

MIXED = ClassificationTheory(
    [("colour", ("red", "green", "blue")), ("size", ("s", "l")), ("on", ("0", "1"))],
    ("no", "yes"),
)


def test_theory_basic_lookups():
    assert MIXED.n_features == 3
    assert MIXED.space_size() == 3 * 2 * 2
    assert MIXED.feature_named("size").index == 1
    assert MIXED.class_index("yes") == 1
    assert MIXED.literal("colour", "blue") == Literal(0, 2)
    assert MIXED.render_literal(Literal(0, 2)) == "colour=blue"


def test_theory_rejects_degenerate_shapes():
    with pytest.raises(StructuralError):
        ClassificationTheory([], ("0", "1"))
    with pytest.raises(StructuralError):
        ClassificationTheory([("f1", ("only",))], ("0", "1"))
    with pytest.raises(StructuralError):
        ClassificationTheory([("f1", ("0", "0"))], ("0", "1"))
    with pytest.raises(StructuralError):
        ClassificationTheory([("f1", ("0", "1"))], ("0",))
    with pytest.raises(StructuralError):
        ClassificationTheory([("f1", ("0", "1")), ("f1", ("0", "1"))], ("0", "1"))


def test_theory_rejects_unknown_names_and_tokens():
    with pytest.raises(StructuralError):
        MIXED.feature_named("weight")
    with pytest.raises(StructuralError):
        MIXED.literal("colour", "purple")
    with pytest.raises(StructuralError):
        MIXED.class_index("maybe")
    with pytest.raises(StructuralError):
        MIXED.check_literal(Literal(0, 3))
    with pytest.raises(StructuralError):
        MIXED.check_literal(Literal(9, 0))


def test_assignment_canonical_order_and_repr():
    e = PartialAssignment(MIXED, [Literal(2, 1), Literal(0, 2)])
    assert e.literals == (Literal(0, 2), Literal(2, 1))
    assert repr(e) == "{colour=blue, on=1}"
    assert repr(PartialAssignment(MIXED, [])) == "{}"


def test_assignment_rejects_two_values_for_one_feature():
    with pytest.raises(StructuralError):
        PartialAssignment(MIXED, [Literal(0, 0), Literal(0, 1)])
    # the same literal twice is just a set, not a conflict
    e = PartialAssignment(MIXED, [Literal(0, 0), Literal(0, 0)])
    assert len(e) == 1


def test_assignment_set_operations():
    theory = binary_theory(3)
    e = pa(theory, "f1=0,f3=1")
    assert Literal(0, 0) in e
    assert e.value_of(2) == 1
    assert e.value_of(1) is None
    assert e.union(pa(theory, "f2=1")) == pa(theory, "f1=0,f2=1,f3=1")
    assert e.without(Literal(0, 0)) == pa(theory, "f3=1")
    assert e.difference(pa(theory, "f3=1")) == pa(theory, "f1=0")
    assert pa(theory, "f1=0").issubset(e)
    assert not e.issubset(pa(theory, "f1=0"))
    assert e.compatible(pa(theory, "f1=0,f2=1"))
    assert not e.compatible(pa(theory, "f1=1"))
    with pytest.raises(StructuralError):
        e.union(pa(theory, "f1=1"))


def test_instance_round_trips():
    x = inst(MIXED, "colour=green,size=l,on=0")
    assert x.values == (1, 1, 0)
    assert x.tokens() == ("green", "l", "0")
    assert Instance.from_tokens(MIXED, x.tokens()) == x
    assert x.as_assignment() == pa(MIXED, "colour=green,size=l,on=0")
    assert repr(x) == "(colour=green, size=l, on=0)"
    with pytest.raises(StructuralError):
        Instance(MIXED, (0, 0))
    with pytest.raises(StructuralError):
        Instance.from_tokens(MIXED, ("red", "s", "2"))


def test_instance_extends():
    x = inst(MIXED, "colour=red,size=s,on=1")
    assert x.extends(pa(MIXED, "colour=red,on=1"))
    assert not x.extends(pa(MIXED, "size=l"))
    assert extends(pa(MIXED, "size=s"), x)


def test_rank_matches_enumeration_order():
    spaces = list(enumerate_feature_space(MIXED))
    for position, x in enumerate(spaces):
        assert x.rank() == position
        assert unrank_instance(MIXED, position) == x
    assert len(spaces) == MIXED.space_size()


def test_enumeration_respects_space_budget():
    with pytest.raises(CapacityError) as err:
        enumerate_feature_space(MIXED, Budgets(space=4))
    assert err.value.required == 12
    assert err.value.budget == 4


def test_subassignments_order_and_count():
    theory = binary_theory(3)
    x = inst(theory, "f1=0,f2=1,f3=0")
    subs = list(subassignments(x.as_assignment()))
    assert len(subs) == 8
    assert subs[0] == pa(theory, "")
    # ascending cardinality, canonical feature order inside one cardinality
    sizes = [len(e) for e in subs]
    assert sizes == sorted(sizes)
    assert subs[1:4] == [pa(theory, "f1=0"), pa(theory, "f2=1"), pa(theory, "f3=0")]
    assert subs[-1] == x.as_assignment()


def test_subassignments_respects_subset_budget():
    theory = binary_theory(3)
    x = inst(theory, "f1=0,f2=1,f3=0")
    with pytest.raises(CapacityError):
        list(subassignments(x.as_assignment(), Budgets(subsets=2)))


@given(st.lists(st.integers(0, 1), min_size=4, max_size=4), st.integers(0, 15))
def test_extends_agrees_with_subset_choice(values, mask):
    theory = binary_theory(4)
    x = Instance(theory, values)
    chosen = PartialAssignment(
        theory, [Literal(f, values[f]) for f in range(4) if mask >> f & 1]
    )
    assert x.extends(chosen)
    for f in range(4):
        others = [l for l in chosen.literals if l.feature != f]
        flipped = PartialAssignment(theory, others + [Literal(f, 1 - values[f])])
        assert not x.extends(flipped)


@given(st.integers(0, 11))
def test_unrank_is_rank_inverse(position):
    assert unrank_instance(MIXED, position).rank() == position


def test_instances_hash_by_value():
    theory = binary_theory(2)
    seen = {inst(theory, "f1=0,f2=1"), inst(theory, "f1=0,f2=1")}
    assert len(seen) == 1
    assert {pa(theory, "f1=0"), pa(theory, "f1=0")} == {pa(theory, "f1=0")}


def test_full_enumeration_is_mixed_radix():
    tokens = [x.tokens() for x in enumerate_feature_space(MIXED)]
    expected = [
        (c, s, o)
        for c in ("red", "green", "blue")
        for s in ("s", "l")
        for o in ("0", "1")
    ]
    assert tokens == expected


def test_subassignments_within_one_cardinality_follow_combinations():
    theory = binary_theory(4)
    x = inst(theory, "f1=1,f2=0,f3=1,f4=0")
    subs = [e for e in subassignments(x.as_assignment()) if len(e) == 2]
    expected = [
        PartialAssignment(theory, [x.literal(i), x.literal(j)])
        for i, j in itertools.combinations(range(4), 2)
    ]
    assert subs == expected
