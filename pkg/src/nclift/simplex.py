"""Exact phase-I simplex for convex-combination feasibility.

Decides whether ``target`` is a convex combination of ``points``.  On success
the weights are returned; otherwise a Farkas vector ``y`` is read off the
final tableau with ``y . (p, 1) <= 0`` for every point and
``y . (target, 1) > 0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import Rational


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    weights: tuple[Fraction, ...] | None
    farkas: tuple[Fraction, ...] | None
    pivots: int


def convex_combination(points: Sequence[Sequence[Rational]], target: Sequence[Rational]) -> FeasibilityResult:
    """Phase-I simplex with Bland's rule on ``sum_j x_j (p_j, 1) = (target, 1)``, ``x >= 0``."""
    n = len(points)
    d = len(target)
    m = d + 1
    rhs = [Fraction(t) for t in target] + [Fraction(1)]
    # flip rows so the right-hand side is nonnegative; remembered for the dual
    sign = [1 if r >= 0 else -1 for r in rhs]
    # tableau columns: n structural, m artificial, then rhs
    width = n + m + 1
    tab: list[list[Fraction]] = []
    for i in range(m):
        row = [Fraction(0)] * width
        for j, p in enumerate(points):
            a = p[i] if i < d else 1
            if a:
                row[j] = Fraction(a * sign[i])
        row[n + i] = Fraction(1)
        row[-1] = rhs[i] * sign[i]
        tab.append(row)
    basis = [n + i for i in range(m)]
    # reduced costs of min sum(artificials)
    cost = [Fraction(0)] * width
    for row in tab:
        for j in range(width):
            if j < n or j == width - 1:
                cost[j] -= row[j]
    pivots = 0
    while True:
        enter = next((j for j in range(n + m) if cost[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:  # unbounded cannot happen for phase I
            raise RuntimeError("phase-I simplex reported an unbounded direction")
        prow = tab[leave]
        inv = 1 / prow[enter]
        prow = [x * inv for x in prow]
        tab[leave] = prow
        for i in range(m):
            if i != leave:
                f = tab[i][enter]
                if f:
                    tab[i] = [x - f * y for x, y in zip(tab[i], prow)]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, prow)]
        basis[leave] = enter
        pivots += 1
    infeasibility = -cost[-1]
    if infeasibility == 0:
        x = [Fraction(0)] * n
        for i, b in enumerate(basis):
            if b < n:
                x[b] = tab[i][-1]
        return FeasibilityResult(True, tuple(x), None, pivots)
    # reduced cost of artificial i is 1 - y_i (in the sign-flipped system)
    y = tuple((1 - cost[n + i]) * sign[i] for i in range(m))
    return FeasibilityResult(False, None, y, pivots)
