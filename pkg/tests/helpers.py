"""Independent oracles and random generators shared by the test modules.

The oracles avoid the package's own linear algebra: ranks go through sympy
and cliques through subset enumeration.
"""
from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import sympy

from nclift.inequality import Inequality, normalize_zero_bound
from nclift.polytope import CorrelationVector, combine, enumerate_vertices, event_index
from nclift.scenario import Scenario


def random_scenario(
    rng: random.Random,
    min_measurements: int = 1,
    max_measurements: int = 5,
    max_outcomes: int = 3,
    max_vertices: int = 96,
    edge_prob: float = 0.5,
    allow_single_outcome: bool = False,
) -> Scenario:
    n = rng.randint(min_measurements, max_measurements)
    low = 1 if allow_single_outcome else 2
    outs = [rng.randint(low, max_outcomes) for _ in range(n)]
    while math.prod(outs) > max_vertices:
        i = max(range(n), key=lambda j: outs[j])
        outs[i] -= 1
    names = [str(i) for i in range(n)]
    pairs = [(a, b) for a, b in itertools.combinations(names, 2) if rng.random() < edge_prob]
    return Scenario.build([(m, [str(k) for k in range(o)]) for m, o in zip(names, outs)], pairs)


def random_neighbors(rng: random.Random, s: Scenario) -> list[str]:
    return [m for m in s.measurements if rng.random() < 0.5]


def brute_force_maximal_cliques(s: Scenario) -> set[frozenset[str]]:
    cliques = [
        frozenset(c)
        for r in range(1, len(s.measurements) + 1)
        for c in itertools.combinations(s.measurements, r)
        if all(s.are_compatible(a, b) for a, b in itertools.combinations(c, 2))
    ]
    return {c for c in cliques if not any(c < d for d in cliques)}


def dimension_formula(s: Scenario) -> int:
    """Sum over all nonempty cliques of the product of (outcomes - 1)."""
    total = 0
    for r in range(1, len(s.measurements) + 1):
        for c in itertools.combinations(s.measurements, r):
            if all(s.are_compatible(a, b) for a, b in itertools.combinations(c, 2)):
                total += math.prod(len(s.outcomes(m)) - 1 for m in c)
    return total


def sympy_rank(rows) -> int:
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else x for x in r] for r in rows]).rank()


def sympy_affine_rank(points) -> int:
    points = [list(p) for p in points]
    if not points:
        return 0
    p0 = points[0]
    return 1 + sympy_rank([[a - b for a, b in zip(p, p0)] for p in points[1:]]) if len(points) > 1 else 1


def nd_dimension(s: Scenario) -> int:
    """Dimension of the affine space cut out by normalization and no-disturbance."""
    idx = event_index(s)
    rows = []
    for ctx in s.contexts:
        row = [0] * len(idx)
        for i in idx.slices[ctx]:
            row[i] = 1
        rows.append(row)
    for a, b in itertools.combinations(s.contexts, 2):
        inter = [m for m in a if m in b]
        for t in itertools.product(*(s.outcomes(m) for m in inter)):
            row = [0] * len(idx)
            for ctx, sign in ((a, 1), (b, -1)):
                for i in idx.slices[ctx]:
                    joint = dict(zip(ctx, idx.entries[i][1]))
                    if all(joint[m] == o for m, o in zip(inter, t)):
                        row[i] += sign
            rows.append(row)
    return len(idx) - sympy_rank(rows) if rows else 0


def random_mixture(rng: random.Random, s: Scenario, k: int = 5) -> tuple[CorrelationVector, list]:
    verts = enumerate_vertices(s)
    chosen = [rng.choice(verts) for _ in range(rng.randint(1, k))]
    raw = [rng.randint(1, 9) for _ in chosen]
    weights = [Fraction(w, sum(raw)) for w in raw]
    return combine([v.vector for v in chosen], weights), list(zip(chosen, weights))


def random_affine_point(rng: random.Random, s: Scenario, k: int = 4) -> CorrelationVector:
    """Affine combination of vertices: satisfies normalization and no-disturbance."""
    verts = enumerate_vertices(s)
    chosen = [rng.choice(verts) for _ in range(k)]
    weights = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(k - 1)]
    weights.append(1 - sum(weights))
    return combine([v.vector for v in chosen], weights)


def random_correlation(rng: random.Random, s: Scenario) -> CorrelationVector:
    """Normalized nonnegative vector, usually disturbing."""
    idx = event_index(s)
    vals = [Fraction(0)] * len(idx)
    for rng_slice in idx.slices.values():
        raw = [rng.randint(0, 5) for _ in rng_slice]
        if not any(raw):
            raw[0] = 1
        for i, r in zip(rng_slice, raw):
            vals[i] = Fraction(r, sum(raw))
    return CorrelationVector(idx, tuple(vals))


def random_valid_inequality(rng: random.Random, s: Scenario, spread: int = 3) -> Inequality:
    """Random coefficients shifted so the minimum over vertices is exactly 0."""
    n = len(event_index(s))
    c = [Fraction(rng.randint(-spread, spread)) for _ in range(n)]
    low = min(sum(c[i] for i in v.support) for v in enumerate_vertices(s))
    return normalize_zero_bound(s, c, "geq", low)


def nonnegativity_seed(rng: random.Random, s: Scenario) -> Inequality:
    idx = event_index(s)
    i = rng.randrange(len(idx))
    coeffs = [Fraction(0)] * len(idx)
    coeffs[i] = Fraction(1)
    return Inequality(s, tuple(coeffs))


def saturating_labels(ineq: Inequality) -> list[tuple[str, ...]]:
    return [v.assignment for v in enumerate_vertices(ineq.scenario) if ineq.value_at(v) == 0]
