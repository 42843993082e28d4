import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from helpers import (
    dimension_formula,
    nd_dimension,
    random_correlation,
    random_mixture,
    random_scenario,
    sympy_affine_rank,
)
from nclift.catalog import antiheptagon_scenario, chsh_inequality, cycle_scenario
from nclift.errors import CapExceededError, DisturbanceError, IndexMismatchError, ScenarioError
from nclift.polytope import (
    CorrelationVector,
    affine_rank,
    ambient_dimension,
    check_no_disturbance,
    coarse_grain,
    combine,
    enumerate_vertices,
    event_index,
    is_noncontextual,
    marginal,
    marginalize,
    nc_dimension,
    restrict_assignment,
    vertex_of,
)
from nclift.scenario import Scenario, extend_with_measurement, extend_with_outcome

BITS = ("0", "1")


def incompatible_pair():
    return Scenario.build({"A": BITS, "B": BITS})


def compatible_pair():
    return Scenario.build({"A": BITS, "B": BITS}, [("A", "B")])


def pr_box():
    half = Fraction(1, 2)
    values = {}
    for ctx in [("0", "1"), ("1", "2"), ("2", "3")]:
        values[(ctx, ("0", "0"))] = half
        values[(ctx, ("1", "1"))] = half
    values[(("3", "0"), ("0", "1"))] = half
    values[(("3", "0"), ("1", "0"))] = half
    return CorrelationVector.from_map(cycle_scenario(4), values)


@pytest.mark.parametrize(
    "scenario, expected",
    [
        (incompatible_pair(), 4),
        (cycle_scenario(4), 16),
        (antiheptagon_scenario(), 56),
        (Scenario.build({}), 0),
    ],
)
def test_ambient_dimension(scenario, expected):
    assert ambient_dimension(scenario) == expected
    assert len(event_index(scenario)) == expected


def test_event_index_order():
    idx = event_index(compatible_pair())
    assert [j for _, j in idx.entries] == [("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")]
    assert idx.position(("B", "A"), ("1", "0")) == 1


def test_vertex_of_incompatible_pair():
    assert vertex_of(incompatible_pair(), {"A": "0", "B": "0"}).vector.values == (1, 0, 1, 0)


@pytest.mark.parametrize("assignment", [{"A": "0"}, {"A": "2", "B": "0"}, {"A": "0", "B": "0", "C": "0"}])
def test_vertex_of_rejects_bad_assignments(assignment):
    with pytest.raises(ScenarioError):
        vertex_of(incompatible_pair(), assignment)


def test_vertex_has_one_entry_per_context():
    for v in enumerate_vertices(cycle_scenario(4)):
        assert sum(v.vector.values) == 4


def test_affine_dependency_of_square():
    s = incompatible_pair()
    v = {lab: vertex_of(s, lab).vector for lab in ("00", "01", "10", "11")}
    assert (v["00"] - v["01"] + v["11"] - v["10"]).is_zero()


@pytest.mark.parametrize(
    "scenario, count",
    [(cycle_scenario(4), 16), (cycle_scenario(5, 3), 243), (Scenario.build({"A": BITS}), 2)],
)
def test_vertex_counts(scenario, count):
    verts = enumerate_vertices(scenario)
    assert len(verts) == count
    assert len({v.vector.values for v in verts}) == count


def test_vertex_order_is_mixed_radix():
    labels = [v.label() for v in enumerate_vertices(incompatible_pair())]
    assert labels == ["00", "01", "10", "11"]


def test_single_measurement_vertices_are_standard_basis():
    assert [v.vector.values for v in enumerate_vertices(Scenario.build({"A": BITS}))] == [(1, 0), (0, 1)]


def test_vertex_cap():
    with pytest.raises(CapExceededError):
        enumerate_vertices(cycle_scenario(5, 3), cap=100)
    with pytest.raises(CapExceededError):
        nc_dimension(cycle_scenario(5, 3), cap=100)


@pytest.mark.parametrize(
    "scenario, rank",
    [(incompatible_pair(), 3), (compatible_pair(), 4)],
)
def test_affine_rank_of_all_vertices(scenario, rank):
    assert affine_rank(enumerate_vertices(scenario)) == rank


def test_affine_rank_edge_cases():
    v = enumerate_vertices(cycle_scenario(4))
    assert affine_rank([v[0]]) == 1
    assert affine_rank([]) == 0
    with pytest.raises(IndexMismatchError):
        affine_rank([v[0], enumerate_vertices(incompatible_pair())[0]])


@pytest.mark.parametrize(
    "scenario, dim",
    [
        (cycle_scenario(4), 8),
        (Scenario.build({"A": BITS, "B": BITS, "C": BITS}), 3),
        (cycle_scenario(5), 10),
        (cycle_scenario(5, 3), 30),
        (antiheptagon_scenario(), 28),
        (Scenario.build({}), 0),
    ],
)
def test_nc_dimension(scenario, dim):
    assert nc_dimension(scenario) == dim
    assert dimension_formula(scenario) == dim


def test_no_disturbance_examples():
    s = cycle_scenario(4)
    assert all(check_no_disturbance(v.vector) for v in enumerate_vertices(s))
    assert check_no_disturbance(CorrelationVector.uniform(s))
    values = {}
    for ctx in s.contexts:
        for joint in itertools.product(BITS, BITS):
            values[(ctx, joint)] = Fraction(1, 4)
    values.update({(("0", "1"), j): 0 for j in itertools.product(BITS, BITS)})
    values[(("0", "1"), ("0", "0"))] = 1
    values.update({(("1", "2"), j): 0 for j in itertools.product(BITS, BITS)})
    values[(("1", "2"), ("1", "1"))] = 1
    assert not check_no_disturbance(CorrelationVector.from_map(s, values))


def test_marginal_reads_first_context():
    q = pr_box()
    assert marginal(q, ["1"]) == {("0",): Fraction(1, 2), ("1",): Fraction(1, 2)}


def test_membership_of_vertex_and_uniform():
    s = cycle_scenario(4)
    v = enumerate_vertices(s)[5]
    res = is_noncontextual(v.vector)
    assert res.noncontextual and res.weights == {v.assignment: 1}
    res = is_noncontextual(CorrelationVector.uniform(s))
    assert res.noncontextual and sum(res.weights.values()) == 1


def test_pr_box_is_contextual():
    q = pr_box()
    assert check_no_disturbance(q)
    res = is_noncontextual(q)
    assert not res.noncontextual
    sep = res.separating
    assert all(sep.value_at(v) >= 0 for v in enumerate_vertices(q.scenario))
    assert sep.value(q) < 0
    # it also violates CHSH: the left-hand side reaches 4 > 3
    assert chsh_inequality().value(q) == -1


def test_membership_preconditions():
    s = cycle_scenario(4)
    with pytest.raises(DisturbanceError):
        is_noncontextual(CorrelationVector(event_index(s), (Fraction(0),) * 16))


def test_correlation_vector_checks():
    s = cycle_scenario(4)
    u = CorrelationVector.uniform(s)
    assert u.is_correlation()
    assert (u - u).is_zero()
    assert not (u + u).is_normalized()
    with pytest.raises(IndexMismatchError):
        u + CorrelationVector.uniform(cycle_scenario(5))
    with pytest.raises(IndexMismatchError):
        CorrelationVector(event_index(s), (0,))


def test_marginalize_vertices_and_uniform():
    ext = extend_with_measurement(cycle_scenario(4), "4", BITS, ["0", "1", "2"])
    for v in enumerate_vertices(ext.scenario):
        assert marginalize(v.vector, ext) == restrict_assignment(v, ext.base).vector
    assert marginalize(CorrelationVector.uniform(ext.scenario), ext) == CorrelationVector.uniform(ext.base)


def test_marginalize_rejects_disturbance():
    ext = extend_with_measurement(cycle_scenario(4), "4", BITS, ["0", "1", "2"])
    rng = __import__("random").Random(3)
    q = random_correlation(rng, ext.scenario)
    assert not check_no_disturbance(q)
    with pytest.raises(DisturbanceError):
        marginalize(q, ext)


def test_coarse_grain_vertices():
    ext = extend_with_outcome(cycle_scenario(5), "0", "2")
    for v in enumerate_vertices(ext.scenario):
        lam = v.as_dict()
        if lam["0"] == "2":
            lam["0"] = "1"
        assert coarse_grain(v.vector, ext, "1") == vertex_of(ext.base, lam).vector


@pytest.mark.parametrize("club", ["2", "7"])
def test_coarse_grain_rejects_bad_outcome(club):
    ext = extend_with_outcome(cycle_scenario(5), "0", "2")
    with pytest.raises(ScenarioError):
        coarse_grain(CorrelationVector.uniform(ext.scenario), ext, club)


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_dimension_oracles_agree(rng):
    s = random_scenario(rng, max_measurements=5, max_vertices=64, allow_single_outcome=True)
    verts = enumerate_vertices(s)
    dim = nc_dimension(s)
    assert dim == dimension_formula(s)
    assert dim == sympy_affine_rank([v.vector.values for v in verts]) - 1
    assert dim == nd_dimension(s)
    # each normalization row already removes one dimension
    if s.contexts:
        assert dim < ambient_dimension(s)


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_mixtures_are_noncontextual(rng):
    s = random_scenario(rng, max_measurements=4, max_vertices=36)
    q, _ = random_mixture(rng, s)
    assert check_no_disturbance(q)
    res = is_noncontextual(q)
    assert res.noncontextual
    verts = {v.assignment: v for v in enumerate_vertices(s)}
    recon = combine([verts[a].vector for a in res.weights], list(res.weights.values()))
    assert recon == q and all(w > 0 for w in res.weights.values())


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False))
def test_maps_commute_with_mixtures(rng):
    s = random_scenario(rng, max_measurements=4, max_vertices=24)
    ext = extend_with_measurement(s, "new", BITS, [m for m in s.measurements if rng.random() < 0.5])
    q, parts = random_mixture(rng, ext.scenario)
    expected = combine([marginalize(v.vector, ext) for v, _ in parts], [w for _, w in parts])
    assert marginalize(q, ext) == expected
    m = rng.choice(s.measurements)
    oext = extend_with_outcome(s, m, "new")
    q, parts = random_mixture(rng, oext.scenario)
    club = rng.choice(s.outcomes(m))
    expected = combine([coarse_grain(v.vector, oext, club) for v, _ in parts], [w for _, w in parts])
    assert coarse_grain(q, oext, club) == expected


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False))
def test_square_dependency_in_random_scenarios(rng):
    s = random_scenario(rng, min_measurements=2, max_measurements=5, max_vertices=64, edge_prob=0.4)
    pairs = [(a, b) for a, b in itertools.combinations(s.measurements, 2) if not s.are_compatible(a, b)]
    if not pairs:
        return
    a, b = rng.choice(pairs)
    lam = {m: rng.choice(s.outcomes(m)) for m in s.measurements}
    a0, a1 = s.outcomes(a)[:2]
    b0, b1 = s.outcomes(b)[:2]

    def v(x, y):
        return vertex_of(s, dict(lam, **{a: x, b: y})).vector

    assert (v(a0, b0) - v(a0, b1) + v(a1, b1) - v(a1, b0)).is_zero()
