"""The seven listener properties: individual checks on hand-picked scenarios
and the observed matrix against the documented profile."""

import random

import pytest

from conftest import inst, pa
from covex.properties import (
    CHECKS,
    EXPECTED_PROFILE,
    MATRIX_KINDS,
    PROPERTIES,
    ScenarioContext,
    check_coherence,
    check_consistency,
    check_independence,
    check_irreducibility,
    check_non_equivalence,
    check_non_triviality,
    check_success,
    compute_matrix,
)
from covex.scenarios import builtin_scenario, builtin_scenarios, random_scenario


def ctx_of(name):
    return ScenarioContext(builtin_scenario(name))


def test_profile_table_is_well_formed():
    assert len(PROPERTIES) == 7
    assert len(MATRIX_KINDS) == 11
    assert set(EXPECTED_PROFILE) == set(PROPERTIES)
    for row in EXPECTED_PROFILE.values():
        assert set(row) == set(MATRIX_KINDS)
    assert set(CHECKS) == set(PROPERTIES)
    # the always-satisfied rows
    for kind in MATRIX_KINDS:
        assert EXPECTED_PROFILE["success"][kind]
        assert EXPECTED_PROFILE["non-triviality"][kind]
        assert EXPECTED_PROFILE["consistency"][kind]


def test_minimal_kinds_are_irreducible_even_under_constraints():
    # dropping a literal from a minimal full-space explanation may leave a
    # condition only infeasible instances contradict; the witness must be
    # sought in the full space for the unconstrained kinds
    ctx = ctx_of("ex1c")
    report = check_irreducibility(ctx, "axp")
    assert report.satisfied
    report = check_irreducibility(ctx, "axpc")
    assert report.satisfied


def test_weak_kinds_fail_irreducibility():
    ctx = ctx_of("ex1")
    report = check_irreducibility(ctx, "waxp")
    assert not report.satisfied
    # verify the witness by hand: dropping the named literal leaves a set no
    # differently classified instance extends
    e = report.witness["explanation"]
    shrunk = e.without(report.witness["literal"])
    x = report.witness["instance"]
    engine = ctx.exact
    assert engine.is_waxp(x, e)
    wrong = [
        y
        for y in engine.full_space.instances
        if y.extends(shrunk) and engine.predict(y) != engine.predict(x)
    ]
    assert wrong == []

    report = check_irreducibility(ctx_of("irr-ab"), "cpi")
    assert not report.satisfied
    t = builtin_scenario("irr-ab").theory
    assert len(report.witness["explanation"]) == 2


def test_dataset_kinds_can_break_coherence():
    ctx = ctx_of("car")
    report = check_coherence(ctx, "d-cpi")
    assert not report.satisfied
    witness = report.witness
    t = ctx.bundle.theory
    pair = {witness["explanation"], witness["other_explanation"]}
    assert pa(t, "power=High") in pair
    # the two rows carry different classes, yet one feasible instance
    # satisfies both explanations at once (it lies outside the sample)
    joint = witness["joint_instance"]
    assert joint.extends(witness["explanation"])
    assert joint.extends(witness["other_explanation"])
    assert ctx.bundle.dataset.row_of(joint) is None

    # exact kinds stay coherent on every built-in scenario
    for name in ("ex1", "ex1c", "ex2", "ex5"):
        assert check_coherence(ctx_of(name), "axpc").satisfied


def test_one_directional_dependency_breaks_independence():
    ctx = ctx_of("ex2")
    report = check_independence(ctx, "axpc")
    assert not report.satisfied
    t = ctx.bundle.theory
    assert report.witness["explanation"] == pa(t, "f2=0")
    assert report.witness["forced"] == pa(t, "f1=0")
    # coverage-maximal kinds prune exactly those pairs
    assert check_independence(ctx, "cpi").satisfied
    assert check_independence(ctx, "mcpi").satisfied


def test_equal_coverage_breaks_non_equivalence():
    ctx = ctx_of("irr-ab")
    report = check_non_equivalence(ctx, "axpc")
    assert not report.satisfied
    first = report.witness["explanation"]
    second = report.witness["equivalent"]
    assert first != second
    space = ctx.feasible_space
    assert space.mask_of(first) == space.mask_of(second)
    # the locked pair of features is what makes them interchangeable
    assert {l.feature for l in first} != {l.feature for l in second}
    # one representative per coverage class restores the property
    assert check_non_equivalence(ctx, "pcpi").satisfied
    # over the full space distinct weak explanations can never be equivalent
    assert check_non_equivalence(ctx, "waxp").satisfied


def test_success_non_triviality_consistency_hold_everywhere():
    for name in ("ex1", "ex1c", "ex2s", "irr-ab", "car"):
        ctx = ctx_of(name)
        for kind in MATRIX_KINDS:
            for check in (check_success, check_non_triviality, check_consistency):
                report = check(ctx, kind)
                assert report is None or report.satisfied


def test_inapplicable_cells_return_none():
    car = ctx_of("car")  # dataset only, no classifier
    assert check_success(car, "axp") is None
    assert check_irreducibility(car, "d-cpi") is None
    ex1 = ctx_of("ex1")  # classifier only, no dataset
    assert check_success(ex1, "d-axp") is None


def test_matrix_over_builtins_and_randoms_matches_profile():
    bundles = list(builtin_scenarios())
    rng = random.Random(0)
    for i in range(10):
        bundles.append(random_scenario(rng, name=f"random-{i:03d}"))
    result = compute_matrix(bundles)
    assert result.matches_expected(), result.divergences()
    assert min(result.fed.values()) > 0
    # every documented violation carries a concrete witness
    for prop in PROPERTIES:
        for kind in MATRIX_KINDS:
            if not EXPECTED_PROFILE[prop][kind]:
                report = result.witnesses[(prop, kind)]
                assert not report.satisfied
                assert report.witness


def test_unfed_cells_are_reported_as_divergences():
    result = compute_matrix([builtin_scenario("ex1")])
    assert not result.matches_expected()
    assert any("no scenario could feed" in line for line in result.divergences())


def test_decisions_quantify_over_rows_for_dataset_kinds():
    ctx = ctx_of("ex2s")
    assert set(ctx.decisions("d-axp")) == set(ctx.bundle.dataset.instances)
    assert set(ctx.decisions("axp")) == set(ctx.feasible_space.instances)
