from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from helpers import sympy_affine_rank, sympy_rank
from nclift import linalg
from nclift.simplex import convex_combination

small = st.fractions(min_value=-4, max_value=4, max_denominator=5)


def matrices(rows=6, cols=5):
    return st.integers(1, cols).flatmap(
        lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=0, max_size=rows)
    )


@pytest.mark.parametrize(
    "row, expected",
    [
        ([2, 4, 6], [1, 2, 3]),
        ([Fraction(1, 2), Fraction(1, 3)], [3, 2]),
        ([0, 0], [0, 0]),
        ([-3, 6], [-1, 2]),
    ],
)
def test_primitive_row(row, expected):
    assert linalg.primitive_row(row) == expected


def test_rank_examples():
    assert linalg.rank([[1, 0], [0, 1], [1, 1]]) == 2
    assert linalg.rank([]) == 0
    assert linalg.rank([[0, 0, 0]]) == 0


def test_affine_rank_examples():
    square = [[1, 0, 1, 0], [1, 0, 0, 1], [0, 1, 1, 0], [0, 1, 0, 1]]
    assert linalg.affine_rank_of(square) == 3
    assert linalg.affine_rank_of([[5, 5]]) == 1
    assert linalg.affine_rank_of([]) == 0


def test_echelon_rejects_wrong_width():
    with pytest.raises(ValueError):
        linalg.EchelonBasis(3).add([1, 2])


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_rank_matches_sympy(rows):
    assert linalg.rank(rows) == sympy_rank(rows)


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_affine_rank_matches_sympy(rows):
    assert linalg.affine_rank_of(rows) == sympy_affine_rank(rows)


@settings(max_examples=50, deadline=None)
@given(matrices(), st.randoms(use_true_random=False))
def test_affine_rank_invariances(rows, rng):
    if not rows:
        return
    shift = [Fraction(rng.randint(-3, 3)) for _ in rows[0]]
    moved = [[a + b for a, b in zip(r, shift)] for r in rows]
    shuffled = list(rows)
    rng.shuffle(shuffled)
    r = linalg.affine_rank_of(rows)
    assert linalg.affine_rank_of(moved) == r
    assert linalg.affine_rank_of(shuffled) == r


@settings(max_examples=100, deadline=None)
@given(matrices(rows=5, cols=5), st.lists(small, min_size=5, max_size=5))
def test_solve_is_exact_or_reports_inconsistency(rows, x):
    if not rows:
        return
    width = len(rows[0])
    x = x[:width]
    rhs = [sum(a * b for a, b in zip(r, x)) for r in rows]
    sol = linalg.solve(rows, rhs)
    assert sol is not None
    assert [sum(a * b for a, b in zip(r, sol)) for r in rows] == rhs
    bumped = list(rhs)
    bumped[0] += 1
    sol = linalg.solve(rows, bumped)
    if sol is not None:
        assert [sum(a * b for a, b in zip(r, sol)) for r in rows] == bumped
    else:
        assert sympy_rank([r + [b] for r, b in zip(rows, bumped)]) > sympy_rank(rows)


def test_convex_combination_feasible():
    pts = [[0, 0], [2, 0], [0, 2]]
    res = convex_combination(pts, [Fraction(1, 2), Fraction(1, 2)])
    assert res.feasible
    assert sum(res.weights) == 1 and all(w >= 0 for w in res.weights)
    assert [sum(w * p[i] for w, p in zip(res.weights, pts)) for i in range(2)] == [Fraction(1, 2)] * 2


def test_convex_combination_farkas():
    pts = [[0, 0], [1, 0], [0, 1]]
    target = [1, 1]
    res = convex_combination(pts, target)
    assert not res.feasible
    y = res.farkas
    assert all(sum(a * b for a, b in zip(y, p + [1])) <= 0 for p in pts)
    assert sum(a * b for a, b in zip(y, target + [1])) > 0


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=6),
       st.lists(small, min_size=3, max_size=3))
def test_convex_combination_certificates(points, target):
    res = convex_combination(points, target)
    if res.feasible:
        assert sum(res.weights) == 1 and min(res.weights) >= 0
        assert [sum(w * p[i] for w, p in zip(res.weights, points)) for i in range(3)] == list(target)
    else:
        y = res.farkas
        assert all(sum(a * b for a, b in zip(y, list(p) + [1])) <= 0 for p in points)
        assert sum(a * b for a, b in zip(y, list(target) + [1])) > 0
