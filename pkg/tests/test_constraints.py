"""Nogood constraint sets: compilation, satisfaction, feasibility, dependency."""

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import binary_theory, inst, pa
from covex.constraints import (
    ConstraintSet,
    Implication,
    compile_implication,
    empty_constraints,
    nogoods_from_expression,
)
from covex.errors import StructuralError, UnsatisfiableConstraintsError
from covex.theory import (
    ClassificationTheory,
    PartialAssignment,
    enumerate_feature_space,
)

THEORY = binary_theory(3)
MIXED = ClassificationTheory(
    [("colour", ("red", "green", "blue")), ("size", ("s", "l"))], ("0", "1")
)


def test_implication_compiles_to_one_nogood_per_excluded_value():
    imp = Implication(pa(THEORY, "f1=1"), pa(THEORY, "f2=1"))
    assert compile_implication(imp) == (pa(THEORY, "f1=1,f2=0"),)

    # a three-valued conclusion feature excludes two values
    imp = Implication(pa(MIXED, "size=l"), pa(MIXED, "colour=red"))
    assert set(compile_implication(imp)) == {
        pa(MIXED, "colour=green,size=l"),
        pa(MIXED, "colour=blue,size=l"),
    }


def test_implication_with_two_conclusion_literals():
    imp = Implication(pa(THEORY, "f1=1"), pa(THEORY, "f2=1,f3=0"))
    assert set(compile_implication(imp)) == {
        pa(THEORY, "f1=1,f2=0"),
        pa(THEORY, "f1=1,f3=1"),
    }


def test_implication_rejects_overlap_and_empty_conclusion():
    with pytest.raises(StructuralError):
        Implication(pa(THEORY, "f1=1"), pa(THEORY, "f1=0,f2=1"))
    with pytest.raises(StructuralError):
        Implication(pa(THEORY, "f1=1"), pa(THEORY, ""))


def test_expression_compiles_to_falsifying_instances():
    nogoods = nogoods_from_expression(THEORY, "f1=1 | f2=1")
    # falsified exactly when f1=0 and f2=0, whatever f3 is
    assert set(nogoods) == {
        pa(THEORY, "f1=0,f2=0,f3=0"),
        pa(THEORY, "f1=0,f2=0,f3=1"),
    }


def test_constraint_set_dedupes_and_sorts():
    c = ConstraintSet(
        THEORY,
        [
            pa(THEORY, "f1=1,f2=0"),
            pa(THEORY, "f3=1"),
            pa(THEORY, "f1=1,f2=0"),
        ],
    )
    assert c.nogoods == (pa(THEORY, "f3=1"), pa(THEORY, "f1=1,f2=0"))


def test_build_merges_three_sources():
    c = ConstraintSet.build(
        THEORY,
        nogoods=[pa(THEORY, "f1=1,f2=0")],
        implications=[Implication(pa(THEORY, "f2=1"), pa(THEORY, "f3=1"))],
        expression="f1=1 | f2=1 | f3=1",
    )
    assert pa(THEORY, "f1=1,f2=0") in c.nogoods
    assert pa(THEORY, "f2=1,f3=0") in c.nogoods
    assert pa(THEORY, "f1=0,f2=0,f3=0") in c.nogoods


def test_unsatisfiable_sets_are_rejected_at_construction():
    with pytest.raises(UnsatisfiableConstraintsError):
        ConstraintSet(THEORY, [pa(THEORY, "")])
    with pytest.raises(UnsatisfiableConstraintsError):
        ConstraintSet(MIXED, [
            pa(MIXED, "colour=red"),
            pa(MIXED, "colour=green"),
            pa(MIXED, "colour=blue"),
        ])
    # same shape minus one value is satisfiable
    ConstraintSet(MIXED, [pa(MIXED, "colour=red"), pa(MIXED, "colour=green")])


def test_satisfies_and_violated_nogood():
    c = ConstraintSet(THEORY, [pa(THEORY, "f1=1,f2=0"), pa(THEORY, "f3=1")])
    assert c.satisfies(pa(THEORY, "f1=1"))
    assert not c.satisfies(pa(THEORY, "f1=1,f2=0"))
    assert not c.satisfies(pa(THEORY, "f1=1,f2=0,f3=1"))
    # first violated nogood in stored (sorted) order
    assert c.violated_nogood(pa(THEORY, "f1=1,f2=0,f3=1")) == pa(THEORY, "f3=1")
    assert c.violated_nogood(pa(THEORY, "f1=0")) is None


def test_satisfies_instance_matches_assignment_form():
    c = ConstraintSet(THEORY, [pa(THEORY, "f1=1,f2=0")])
    for x in enumerate_feature_space(THEORY):
        assert c.satisfies_instance(x) == c.satisfies(x.as_assignment())


def test_feasible_instances_filter_full_space():
    c = ConstraintSet(THEORY, [pa(THEORY, "f1=1,f2=0")])
    feasible = c.feasible_instances()
    assert len(feasible) == 6
    assert inst(THEORY, "f1=1,f2=0,f3=0") not in feasible
    assert feasible is c.feasible_instances()  # cached


def test_empty_constraints_allow_everything():
    c = empty_constraints(THEORY)
    assert c.nogoods == ()
    assert len(c.feasible_instances()) == 8
    assert c.satisfies(pa(THEORY, "f1=1,f2=0,f3=1"))


def test_dependency_under_empty_constraints_is_subset():
    c = empty_constraints(THEORY)
    assert c.is_dependency(pa(THEORY, "f1=1,f2=0"), pa(THEORY, "f1=1"))
    assert not c.is_dependency(pa(THEORY, "f1=1"), pa(THEORY, "f1=1,f2=0"))
    # requires both nonempty and distinct
    assert not c.is_dependency(pa(THEORY, "f1=1"), pa(THEORY, "f1=1"))
    assert not c.is_dependency(pa(THEORY, ""), pa(THEORY, "f1=1"))
    assert not c.is_dependency(pa(THEORY, "f1=1"), pa(THEORY, ""))


def test_dependency_created_by_constraints():
    # locking f1 and f2 together makes each force the other
    c = ConstraintSet(THEORY, [pa(THEORY, "f1=0,f2=1"), pa(THEORY, "f1=1,f2=0")])
    assert c.is_dependency(pa(THEORY, "f1=1"), pa(THEORY, "f2=1"))
    assert c.is_dependency(pa(THEORY, "f2=1"), pa(THEORY, "f1=1"))
    assert not c.is_dependency(pa(THEORY, "f1=1"), pa(THEORY, "f3=1"))


def test_constraint_sets_compare_by_compiled_nogoods():
    a = ConstraintSet(THEORY, [pa(THEORY, "f1=1,f2=0")])
    b = ConstraintSet.build(
        THEORY, implications=[Implication(pa(THEORY, "f1=1"), pa(THEORY, "f2=1"))]
    )
    assert a == b
    assert hash(a) == hash(b)
    assert a != ConstraintSet(THEORY, [pa(THEORY, "f1=0,f2=1")])


def _random_assignment(rng, width):
    feats = rng.sample(range(3), width)
    return PartialAssignment(
        THEORY, [(f, rng.randint(0, 1)) for f in feats]
    )


@given(st.integers(0, 10_000))
def test_satisfaction_is_antimonotone(seed):
    rng = random.Random(seed)
    try:
        c = ConstraintSet(
            THEORY,
            [_random_assignment(rng, rng.randint(1, 3)) for _ in range(rng.randint(1, 3))],
        )
    except UnsatisfiableConstraintsError:
        return
    big = _random_assignment(rng, rng.randint(0, 3))
    small = PartialAssignment(
        THEORY, [l for l in big.literals if rng.random() < 0.6]
    )
    if c.satisfies(big):
        assert c.satisfies(small)
    if not c.satisfies(small):
        assert not c.satisfies(big)


@given(st.integers(0, 10_000))
def test_first_feasible_agrees_with_full_scan(seed):
    rng = random.Random(seed)
    nogoods = [_random_assignment(rng, rng.randint(1, 3)) for _ in range(rng.randint(1, 4))]
    any_survivor = any(
        all(not x.extends(n) for n in nogoods)
        for x in enumerate_feature_space(THEORY)
    )
    try:
        ConstraintSet(THEORY, nogoods)
        assert any_survivor
    except UnsatisfiableConstraintsError:
        assert not any_survivor
