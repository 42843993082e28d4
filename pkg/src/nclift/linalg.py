"""Exact linear algebra over the rationals.

Rows are reduced with integer (fraction-free) arithmetic: every rational row
is scaled to a primitive integer row first, so ranks of 0/1 vertex data never
touch :class:`fractions.Fraction` in the inner loop.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction | int


def primitive_row(row: Sequence[Rational]) -> list[int]:
    """Scale ``row`` to an integer row whose entries have gcd 1."""
    den = 1
    for x in row:
        if isinstance(x, Fraction) and x.denominator != 1:
            den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in row] if den != 1 else [int(x) for x in row]
    g = math.gcd(*ints) if ints else 0
    if g > 1:
        ints = [x // g for x in ints]
    return ints


def _first_nonzero(row: Sequence[int], start: int = 0) -> int:
    for j in range(start, len(row)):
        if row[j]:
            return j
    return -1


class EchelonBasis:
    """Incrementally maintained row-echelon basis.

    Rows are inserted in the caller's order; a row is kept iff it is linearly
    independent of the rows kept so far.  The pivot of a kept row is its first
    nonzero column, so the result is deterministic for a given input order.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._rows: dict[int, list[int]] = {}

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, row: Sequence[Rational]) -> list[int]:
        """Return the primitive integer residue of ``row`` against the basis."""
        if len(row) != self.ncols:
            raise ValueError(f"row has length {len(row)}, expected {self.ncols}")
        v = primitive_row(row)
        c = _first_nonzero(v)
        while c >= 0:
            pivot_row = self._rows.get(c)
            if pivot_row is None:
                return v
            a, b = pivot_row[c], v[c]
            v = [a * x - b * y for x, y in zip(v, pivot_row)]
            g = math.gcd(*v)
            if g > 1:
                v = [x // g for x in v]
            c = _first_nonzero(v, c + 1)
        return v

    def add(self, row: Sequence[Rational]) -> bool:
        """Insert ``row``; return True when it increased the rank."""
        v = self.reduce(row)
        c = _first_nonzero(v)
        if c < 0:
            return False
        if v[c] < 0:
            v = [-x for x in v]
        self._rows[c] = v
        return True

    def contains(self, row: Sequence[Rational]) -> bool:
        return _first_nonzero(self.reduce(row)) < 0


def rank(rows: Iterable[Sequence[Rational]], ncols: int | None = None) -> int:
    rows = list(rows)
    if not rows:
        return 0
    basis = EchelonBasis(len(rows[0]) if ncols is None else ncols)
    for r in rows:
        basis.add(r)
    return basis.rank


def independent_rows(rows: Sequence[Sequence[Rational]]) -> list[int]:
    """Indices of a maximal linearly independent subset, greedy in input order."""
    if not rows:
        return []
    basis = EchelonBasis(len(rows[0]))
    return [i for i, r in enumerate(rows) if basis.add(r)]


def affine_basis(points: Sequence[Sequence[Rational]]) -> list[int]:
    """Indices of a maximal affinely independent subset of ``points``.

    The first point is always included; later points are kept when their
    difference from the first point is independent of those kept so far.
    """
    if not points:
        return []
    p0 = points[0]
    basis = EchelonBasis(len(p0))
    kept = [0]
    for i in range(1, len(points)):
        if basis.add([x - y for x, y in zip(points[i], p0)]):
            kept.append(i)
    return kept


def affine_rank_of(points: Sequence[Sequence[Rational]]) -> int:
    """Size of a maximal affinely independent subset (0 for no points)."""
    return len(affine_basis(points))


def solve(matrix: Sequence[Sequence[Rational]], rhs: Sequence[Rational]) -> list[Fraction] | None:
    """One exact solution ``x`` of ``matrix @ x == rhs`` or None if inconsistent.

    Free variables are set to zero.  Gauss-Jordan elimination over Fraction.
    """
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    if len(rhs) != m:
        raise ValueError("rhs length does not match the number of rows")
    aug = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(matrix)]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    if any(aug[i][n] != 0 for i in range(r, m)):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = aug[i][n]
    return x
