"""Randomized cross-checks of the exact engine against its definitional
enumerations, plus the documented inclusion relationships between kinds."""

import random

import pytest

from covex.scenarios import random_scenario


def _sets(engine, x):
    return {kind: set(engine.enumerate_all(kind, x)) for kind in
            ("waxp", "axp", "waxpc", "axpc", "cpi", "mcpi", "pcpi")}


@pytest.mark.parametrize("seed", range(60))
def test_searches_agree_with_enumeration(seed):
    bundle = random_scenario(random.Random(1000 + seed), with_dataset=False)
    engine = bundle.exact_engine()
    n = engine.theory.n_features
    for x in engine.feasible_space.instances:
        sets = _sets(engine, x)

        assert engine.find_axp(x).assignment in sets["axp"]
        assert engine.find_axpc(x).assignment in sets["axpc"]

        found = engine.find_cpi_xp(x)
        assert found.assignment in sets["cpi"]
        assert found.iterations <= n

        minimal = engine.minimize_cpi(x, found.assignment)
        assert minimal.assignment in sets["mcpi"]
        assert minimal.oracle_calls <= 2 * n
        assert minimal.coverage.mask == found.coverage.mask

        preferred = engine.find_pcpi_xp(x)
        assert preferred.assignment in sets["pcpi"]

        for e in sets["waxpc"]:
            assert engine.is_cpi_xp(x, e) == (e in sets["cpi"])


@pytest.mark.parametrize("seed", range(60))
def test_inclusions_between_kinds(seed):
    bundle = random_scenario(random.Random(1000 + seed), with_dataset=False)
    engine = bundle.exact_engine()
    for x in engine.feasible_space.instances:
        sets = _sets(engine, x)

        assert sets["axp"] <= sets["waxp"]
        assert sets["axpc"] <= sets["waxpc"]
        assert sets["cpi"] <= sets["waxpc"]
        assert sets["mcpi"] <= sets["axpc"]
        assert sets["pcpi"] <= sets["mcpi"] <= sets["cpi"]

        # every minimal explanation over F shrinks to one over F[C]
        for e in sets["axp"]:
            assert any(other.issubset(e) for other in sets["axpc"])

        if bundle.constraints is None or not len(bundle.constraints):
            assert sets["axp"] == sets["axpc"] == sets["mcpi"]

        # nothing weak is empty unless the classifier were constant
        assert all(len(e) > 0 for e in sets["waxpc"])


@pytest.mark.parametrize("seed", range(30))
def test_preferred_representative_is_canonical(seed):
    bundle = random_scenario(random.Random(4000 + seed), with_dataset=False)
    engine = bundle.exact_engine()
    space = engine.feasible_space
    for x in space.instances:
        reps = engine.enumerate_all("pcpi", x)
        by_coverage = {space.mask_of(e): e for e in reps}
        found = engine.find_pcpi_xp(x)
        # the search must land exactly on the representative of its class
        assert by_coverage[space.mask_of(found.assignment)] == found.assignment
        # representatives are minimal in (cardinality, canonical order) among
        # the equivalent coverage-maximal explanations
        for e in engine.enumerate_all("cpi", x):
            rep = by_coverage.get(space.mask_of(e))
            if rep is not None:
                assert (len(rep), rep.literals) <= (len(e), e.literals)
