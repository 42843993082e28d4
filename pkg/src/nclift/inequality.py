"""Noncontextuality inequalities in zero-bound form ``b . p >= 0``."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from . import linalg
from .errors import EffectiveFormError, IndexMismatchError, InvalidInequalityError, ScenarioError
from .linalg import Rational
from .polytope import (
    DEFAULT_VERTEX_CAP,
    CorrelationVector,
    EventIndex,
    Vertex,
    enumerate_vertices,
    event_index,
    nc_dimension,
)
from .scenario import Context, Scenario, maximal_cliques

Term = tuple[Context, tuple[str, ...], Fraction]


@dataclass(frozen=True)
class OriginalForm:
    """The inequality as it was written before canonicalization."""

    relation: str
    bound: Fraction
    terms: tuple[Term, ...]


@dataclass(frozen=True)
class Inequality:
    """``coefficients . p >= 0`` over the correlation space of ``scenario``.

    ``provenance`` holds the chain of lifting records that produced it and
    ``original`` the as-written form; neither takes part in equality.
    """

    scenario: Scenario
    coefficients: tuple[Fraction, ...]
    provenance: tuple = field(default=(), compare=False)
    original: OriginalForm | None = field(default=None, compare=False)

    def __post_init__(self):
        n = len(event_index(self.scenario))
        if len(self.coefficients) != n:
            raise IndexMismatchError(f"expected {n} coefficients, got {len(self.coefficients)}")
        object.__setattr__(self, "coefficients", tuple(Fraction(c) for c in self.coefficients))

    @property
    def bound(self) -> Fraction:
        return Fraction(0)

    @property
    def index(self) -> EventIndex:
        return event_index(self.scenario)

    def value(self, q: CorrelationVector) -> Fraction:
        if q.scenario != self.scenario:
            raise IndexMismatchError("correlation and inequality live on different scenarios")
        return sum((b * x for b, x in zip(self.coefficients, q.values) if x), Fraction(0))

    def value_at(self, v: Vertex) -> Fraction:
        return sum((self.coefficients[i] for i in v.support), Fraction(0))

    def coefficient(self, context: Iterable[str], joint: Sequence[str]) -> Fraction:
        return self.coefficients[self.index.position(context, joint)]

    def vector(self) -> CorrelationVector:
        return CorrelationVector(self.index, self.coefficients)

    def scaled(self, c: Rational) -> "Inequality":
        return Inequality(self.scenario, tuple(c * b for b in self.coefficients), self.provenance)

    def __add__(self, other: "Inequality") -> "Inequality":
        if other.scenario != self.scenario:
            raise IndexMismatchError("inequalities live on different scenarios")
        return Inequality(self.scenario, tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __neg__(self) -> "Inequality":
        return self.scaled(-1)

    def with_normalization(self, weights: Mapping[Context, Rational]) -> "Inequality":
        """Add ``weights[C]`` times the normalization row of each context ``C``.

        On normalized correlations this shifts the value by ``sum(weights)``.
        """
        coeffs = list(self.coefficients)
        for ctx, w in weights.items():
            for i in self.index.slices[ctx]:
                coeffs[i] += w
        return Inequality(self.scenario, tuple(coeffs), self.provenance)


def normalize_zero_bound(
    scenario: Scenario, coefficients: Sequence[Rational], relation: str = "geq", bound: Rational = 0
) -> Inequality:
    """Rewrite ``c.p <= bound`` or ``c.p >= bound`` as ``b.p >= 0``.

    The bound is spread evenly over the normalization rows of the maximal
    contexts, so ``b.p`` equals ``bound - c.p`` (resp. ``c.p - bound``) on
    every normalized correlation.
    """
    bound = Fraction(bound)
    n = len(scenario.contexts)
    if n == 0 and bound != 0:
        raise ScenarioError("a nonzero bound needs at least one maximal context")
    share = bound / n if n else Fraction(0)
    if relation == "leq":
        coeffs = tuple(share - Fraction(c) for c in coefficients)
    elif relation == "geq":
        coeffs = tuple(Fraction(c) - share for c in coefficients)
    else:
        raise ValueError(f"relation must be 'leq' or 'geq', not {relation!r}")
    return Inequality(scenario, coeffs)


def expand_terms(scenario: Scenario, terms: Iterable[tuple[Iterable[str], Sequence[str], Rational]]) -> list[Fraction]:
    """Coefficient vector of a sum of probability terms.

    A term on a partial context ``U`` is written as the marginal of the
    canonically first maximal context containing ``U``.
    """
    idx = event_index(scenario)
    coeffs = [Fraction(0)] * len(idx)
    for context, joint, coeff in terms:
        context = tuple(str(m) for m in context)
        joint = tuple(str(o) for o in joint)
        if len(context) != len(joint):
            raise ScenarioError(f"context {context} and outcome {joint} differ in length")
        if len(set(context)) != len(context):
            raise ScenarioError(f"context {context} repeats a measurement")
        if not scenario.is_context(context):
            raise ScenarioError(f"{context} is not a context of the scenario")
        for m, o in zip(context, joint):
            if o not in scenario.outcomes(m):
                raise ScenarioError(f"{o!r} is not an outcome of measurement {m!r}")
        fixed = dict(zip(context, joint))
        ctx = scenario.containing_context(context)
        free = [m for m in ctx if m not in fixed]
        for rest in itertools.product(*(scenario.outcomes(m) for m in free)):
            full = dict(fixed, **dict(zip(free, rest)))
            coeffs[idx.lookup[(ctx, tuple(full[m] for m in ctx))]] += Fraction(coeff)
    return coeffs


def from_terms(
    scenario: Scenario,
    terms: Iterable[tuple[Iterable[str], Sequence[str], Rational]],
    relation: str = "geq",
    bound: Rational = 0,
) -> Inequality:
    terms = [(tuple(str(m) for m in c), tuple(str(o) for o in j), Fraction(k)) for c, j, k in terms]
    ineq = normalize_zero_bound(scenario, expand_terms(scenario, terms), relation, bound)
    return Inequality(ineq.scenario, ineq.coefficients, (), OriginalForm(relation, Fraction(bound), tuple(terms)))


def to_terms(ineq: Inequality, relation: str = "geq", bound: Rational = 0) -> list[Term]:
    """Nonzero terms of ``c`` with ``c.p (relation) bound`` equivalent to ``ineq``.

    Inverse of :func:`normalize_zero_bound` for the given relation and bound.
    """
    n = len(ineq.scenario.contexts)
    share = Fraction(bound) / n if n else Fraction(0)
    out = []
    for (ctx, joint), b in zip(ineq.index.entries, ineq.coefficients):
        c = share - b if relation == "leq" else b + share
        if c:
            out.append((ctx, joint, c))
    return out


def format_terms(terms: Iterable[Term]) -> str:
    parts = []
    for ctx, joint, c in terms:
        p = f"p({''.join(joint) if all(len(o) == 1 for o in joint) else ','.join(joint)}|{''.join(ctx) if all(len(m) == 1 for m in ctx) else ','.join(ctx)})"
        if c == 1:
            parts.append(f"+ {p}")
        elif c == -1:
            parts.append(f"- {p}")
        elif c > 0:
            parts.append(f"+ {c}*{p}")
        else:
            parts.append(f"- {-c}*{p}")
    text = " ".join(parts) or "0"
    return text[2:] if text.startswith("+ ") else text


def evaluate(ineq: Inequality, q: CorrelationVector | Vertex) -> Fraction:
    return ineq.value_at(q) if isinstance(q, Vertex) else ineq.value(q)


def vertex_values(ineq: Inequality, cap: int = DEFAULT_VERTEX_CAP) -> list[Fraction]:
    return [ineq.value_at(v) for v in enumerate_vertices(ineq.scenario, cap)]


def is_valid(ineq: Inequality, cap: int = DEFAULT_VERTEX_CAP) -> bool:
    return all(x >= 0 for x in vertex_values(ineq, cap))


def saturating_vertices(ineq: Inequality, cap: int = DEFAULT_VERTEX_CAP) -> list[Vertex]:
    verts = enumerate_vertices(ineq.scenario, cap)
    values = [ineq.value_at(v) for v in verts]
    if any(x < 0 for x in values):
        raise InvalidInequalityError("inequality is violated by some vertex; its face is undefined")
    return [v for v, x in zip(verts, values) if x == 0]


FACET = "facet"
LOWER_DIM = "proper-face-lower-dim"
IMPROPER = "improper-whole-polytope"
EMPTY = "empty-face"
INVALID = "invalid"


@dataclass(frozen=True)
class FacetReport:
    valid: bool
    saturating_vertex_count: int
    saturating_affine_rank: int
    polytope_dimension: int
    total_vertices: int
    verdict: str

    @property
    def is_facet(self) -> bool:
        return self.verdict == FACET

    def as_dict(self) -> dict:
        return {
            "valid": self.valid,
            "saturating_vertex_count": self.saturating_vertex_count,
            "saturating_affine_rank": self.saturating_affine_rank,
            "polytope_dimension": self.polytope_dimension,
            "total_vertices": self.total_vertices,
            "verdict": self.verdict,
        }


def is_facet(ineq: Inequality, cap: int = DEFAULT_VERTEX_CAP) -> FacetReport:
    """Classify the face supported by ``ineq``.

    A facet needs ``dim(P)`` affinely independent saturating vertices and at
    least one vertex off the face.
    """
    s = ineq.scenario
    verts = enumerate_vertices(s, cap)
    values = [ineq.value_at(v) for v in verts]
    valid = all(x >= 0 for x in values)
    sat = [v.vector.values for v, x in zip(verts, values) if x == 0]
    rank = linalg.affine_rank_of(sat)
    dim = nc_dimension(s, cap)
    if not valid:
        verdict = INVALID
    elif len(sat) == len(verts):
        verdict = IMPROPER
    elif rank == dim:
        verdict = FACET
    elif not sat:
        verdict = EMPTY
    else:
        verdict = LOWER_DIM
    return FacetReport(valid, len(sat), rank, dim, len(verts), verdict)


def contributing_measurements(ineq: Inequality, cap: int = DEFAULT_VERTEX_CAP) -> frozenset[str]:
    """Measurements whose outcome changes the value at some vertex."""
    s = ineq.scenario
    values = vertex_values(ineq, cap)
    radices = [len(o) for o in s.outcome_sets]
    out = set()
    stride = 1
    for i in reversed(range(len(radices))):
        r = radices[i]
        for t, x in enumerate(values):
            digit = (t // stride) % r
            if digit and x != values[t - digit * stride]:
                out.add(s.measurements[i])
                break
        stride *= r
    return frozenset(out)


# -- effective form ------------------------------------------------------------


@dataclass(frozen=True)
class EffectiveForm:
    """An inequality rewritten so that only contributing measurements matter.

    ``inequality`` is outcome-symmetric in every non-contributing measurement
    and agrees with ``source`` on all vertices.  ``table`` maps each maximal
    clique ``U`` of the contributing measurements and each joint outcome ``s``
    of ``U`` to a coefficient, such that summing ``table[U, lambda|U]`` over
    the cliques gives the value of the inequality at the vertex of ``lambda``.
    """

    source: Inequality
    inequality: Inequality
    contributing: frozenset[str]
    cliques: tuple[Context, ...]
    table: Mapping[tuple[Context, tuple[str, ...]], Fraction]
    reconciled: bool = False

    def value_at_assignment(self, assignment: Mapping[str, str]) -> Fraction:
        return sum(
            (self.table[(u, tuple(assignment[m] for m in u))] for u in self.cliques), Fraction(0)
        )

    def clique_coefficients(self, clique: Context) -> dict[tuple[str, ...], Fraction]:
        s = self.source.scenario
        return {j: self.table[(clique, j)] for j in itertools.product(*(s.outcomes(m) for m in clique))}


def _project(ctx: Context, joint: tuple[str, ...], members: Context) -> tuple[str, ...]:
    return tuple(joint[ctx.index(m)] for m in members)


def contributing_cliques(s: Scenario, contributing: Iterable[str]) -> list[Context]:
    """Maximal cliques of the contributing measurements (``[()]`` if there are none)."""
    contributing = set(contributing)
    members = [m for m in s.measurements if m in contributing]
    return maximal_cliques(members, s.adjacency) if members else [()]


def effective_form(ineq: Inequality, cap: int = DEFAULT_VERTEX_CAP) -> EffectiveForm:
    """Symmetrize over non-contributing measurements and tabulate per clique."""
    s = ineq.scenario
    idx = ineq.index
    contributing = contributing_measurements(ineq, cap)
    b = list(ineq.coefficients)

    # average each context over the outcomes of its non-contributing members
    projected: dict[Context, dict[tuple[str, ...], Fraction]] = {}
    for ctx in s.contexts:
        kept = tuple(m for m in ctx if m in contributing)
        groups: dict[tuple[str, ...], list[int]] = {}
        for i in idx.slices[ctx]:
            groups.setdefault(_project(ctx, idx.entries[i][1], kept), []).append(i)
        table = {}
        for key, members in groups.items():
            avg = sum((b[i] for i in members), Fraction(0)) / len(members)
            for i in members:
                b[i] = avg
            table[key] = avg
        projected[ctx] = table

    cliques = contributing_cliques(s, contributing)
    clique_set = set(cliques)

    # contexts sharing the same maximal clique get one common coefficient table
    reconciled = False
    by_clique: dict[Context, list[Context]] = {}
    for ctx in s.contexts:
        kept = tuple(m for m in ctx if m in contributing)
        if kept in clique_set:
            by_clique.setdefault(kept, []).append(ctx)
    for u, ctxs in by_clique.items():
        if len(ctxs) < 2 or all(projected[c] == projected[ctxs[0]] for c in ctxs[1:]):
            continue
        reconciled = True
        mean = {key: sum((projected[c][key] for c in ctxs), Fraction(0)) / len(ctxs) for key in projected[ctxs[0]]}
        for c in ctxs:
            projected[c] = dict(mean)
            for i in idx.slices[c]:
                b[i] = mean[_project(c, idx.entries[i][1], u)]

    # each context's table is charged to the first maximal clique containing its contributing part
    table: dict[tuple[Context, tuple[str, ...]], Fraction] = {}
    for u in cliques:
        for joint in itertools.product(*(s.outcomes(m) for m in u)):
            table[(u, joint)] = Fraction(0)
    for ctx in s.contexts:
        kept = tuple(m for m in ctx if m in contributing)
        u = next(c for c in cliques if set(kept).issubset(c))
        for joint in itertools.product(*(s.outcomes(m) for m in u)):
            table[(u, joint)] += projected[ctx][_project(u, joint, kept)]

    symmetrized = Inequality(s, tuple(b), ineq.provenance, ineq.original)
    form = EffectiveForm(ineq, symmetrized, contributing, tuple(cliques), table, reconciled)
    for v in enumerate_vertices(s, cap):
        expected = ineq.value_at(v)
        if symmetrized.value_at(v) != expected or form.value_at_assignment(v.as_dict()) != expected:
            raise EffectiveFormError(f"effective form disagrees with the inequality at vertex {v.assignment}")
    return form


def satisfies_symmetry(ineq: Inequality, measurement: str) -> bool:
    """True iff coefficients do not depend on ``measurement``'s outcome in any context."""
    idx = ineq.index
    for ctx in ineq.scenario.contexts:
        if measurement not in ctx:
            continue
        k = ctx.index(measurement)
        seen: dict[tuple[str, ...], Fraction] = {}
        for i in idx.slices[ctx]:
            joint = idx.entries[i][1]
            key = joint[:k] + joint[k + 1:]
            if seen.setdefault(key, ineq.coefficients[i]) != ineq.coefficients[i]:
                return False
    return True


# -- equivalence ---------------------------------------------------------------


@lru_cache(maxsize=64)
def _vertex_affine_basis(s: Scenario) -> tuple[Vertex, ...]:
    verts = enumerate_vertices(s, math.inf)
    return tuple(verts[i] for i in linalg.affine_basis([v.vector.values for v in verts]))


def equivalent(a: Inequality, b: Inequality, cap: int = DEFAULT_VERTEX_CAP) -> bool:
    """True iff ``a`` is a positive multiple of ``b`` as a functional on the polytope.

    Both are compared on an affine basis of vertices, which determines an
    affine functional on the whole polytope.
    """
    if a.scenario != b.scenario:
        return False
    enumerate_vertices(a.scenario, cap)
    basis = _vertex_affine_basis(a.scenario)
    fa = [a.value_at(v) for v in basis]
    fb = [b.value_at(v) for v in basis]
    j = next((i for i, x in enumerate(fb) if x), None)
    if j is None:
        return not any(fa)
    c = fa[j] / fb[j]
    return c > 0 and all(x == c * y for x, y in zip(fa, fb))


def nonnegativity(scenario: Scenario, context: Iterable[str], joint: Sequence[str]) -> Inequality:
    """``p(joint|context) >= 0``."""
    return from_terms(scenario, [(tuple(context), tuple(joint), 1)], "geq", 0)


def zero_inequality(scenario: Scenario) -> Inequality:
    return Inequality(scenario, (Fraction(0),) * len(event_index(scenario)))
