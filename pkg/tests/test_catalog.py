import itertools
from pathlib import Path

import pytest

from nclift import catalog
from nclift.catalog import (
    ANTIHEPTAGON_CONTEXTS,
    ANTIHEPTAGON_CYCLE,
    FIXTURES,
    antiheptagon_scenario,
    chsh_inequality,
    chsh_zero_bound_inequality,
    complement_cycle_scenario,
    cycle_scenario,
    fixture,
    kcbs_inequality,
)
from nclift.formats import load_inequality, load_scenario
from nclift.inequality import equivalent, is_facet, vertex_values
from nclift.polytope import enumerate_vertices
from nclift.scenario import find_induced_cycle

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_cycle_scenario_shape(n):
    s = cycle_scenario(n)
    assert len(s.contexts) == n
    assert all(len(c) == 2 for c in s.contexts)
    assert find_induced_cycle(s) == [str(i) for i in range(n)]


@pytest.mark.parametrize("n", [1, 2])
def test_cycle_scenario_rejects_short_cycles(n):
    with pytest.raises(ValueError):
        cycle_scenario(n)


def test_standard_and_hidden_cycle_labellings_are_isomorphic():
    standard = complement_cycle_scenario(7)
    hidden = antiheptagon_scenario()
    assert len(standard.contexts) == len(hidden.contexts) == 7
    relabel = {str(i): ANTIHEPTAGON_CYCLE[i] for i in range(7)}
    mapped = {frozenset(relabel[m] for m in c) for c in standard.contexts}
    assert mapped == {frozenset(c) for c in ANTIHEPTAGON_CONTEXTS}
    assert {frozenset(c) for c in standard.contexts} != mapped


def test_antiheptagon_cycle_is_the_complement():
    s = antiheptagon_scenario()
    for i, j in itertools.combinations(range(7), 2):
        a, b = ANTIHEPTAGON_CYCLE[i], ANTIHEPTAGON_CYCLE[j]
        adjacent_in_cycle = (j - i) % 7 in (1, 6)
        assert s.are_compatible(a, b) != adjacent_in_cycle


@pytest.mark.parametrize(
    "ineq, maximum",
    [(chsh_inequality(), 3), (kcbs_inequality(), 2)],
)
def test_seed_bounds_by_brute_force(ineq, maximum):
    form = ineq.original
    lhs = [sum(c * v.vector.values[ineq.index.position(ctx, j)] for ctx, j, c in form.terms)
           for v in enumerate_vertices(ineq.scenario)]
    assert max(lhs) == maximum
    assert min(vertex_values(ineq)) == 0


def test_chsh_forms_agree():
    assert equivalent(chsh_inequality(), chsh_zero_bound_inequality())
    assert is_facet(chsh_zero_bound_inequality()).is_facet


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixtures_build(name):
    fx = fixture(name)
    assert fx.name == name
    for ineq in fx.inequalities.values():
        assert is_facet(ineq).is_facet


def test_unknown_fixture():
    with pytest.raises(KeyError, match="unknown fixture"):
        fixture("nope")


@pytest.mark.parametrize(
    "path, builder",
    [
        ("scenarios/4-cycle.json", lambda: cycle_scenario(4)),
        ("scenarios/5-cycle.json", lambda: cycle_scenario(5)),
        ("scenarios/5-cycle-3out.json", catalog.trichotomic_cycle_scenario),
        ("scenarios/antiheptagon.json", antiheptagon_scenario),
        ("scenarios/square_with_apex.json", catalog.square_with_apex_scenario),
    ],
)
def test_shipped_scenarios_match_catalog(path, builder):
    assert load_scenario(FIXTURE_DIR / path) == builder()


@pytest.mark.parametrize(
    "path, builder",
    [
        ("inequalities/chsh.json", chsh_inequality),
        ("inequalities/kcbs.json", kcbs_inequality),
        ("inequalities/traced_chsh.json", catalog.traced_chsh_inequality),
    ],
)
def test_shipped_inequalities_match_catalog(path, builder):
    loaded = load_inequality(FIXTURE_DIR / path)
    assert loaded == builder()
    assert (loaded.original.relation, loaded.original.bound) == (builder().original.relation, builder().original.bound)
