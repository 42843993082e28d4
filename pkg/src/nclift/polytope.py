"""Correlation vectors, deterministic vertices and the noncontextual polytope."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

from . import linalg
from .errors import CapExceededError, DisturbanceError, IndexMismatchError, ScenarioError
from .linalg import Rational
from .scenario import Context, MeasurementExtension, OutcomeExtension, Scenario
from .simplex import convex_combination

DEFAULT_VERTEX_CAP = 100_000

Event = tuple[Context, tuple[str, ...]]


@dataclass(frozen=True, eq=False)
class EventIndex:
    """Component layout of correlation vectors on one scenario."""

    scenario: Scenario

    @cached_property
    def entries(self) -> tuple[Event, ...]:
        s = self.scenario
        out = []
        for ctx in s.contexts:
            for joint in itertools.product(*(s.outcomes(m) for m in ctx)):
                out.append((ctx, joint))
        return tuple(out)

    @cached_property
    def lookup(self) -> dict[Event, int]:
        return {e: i for i, e in enumerate(self.entries)}

    @cached_property
    def slices(self) -> dict[Context, range]:
        out, start = {}, 0
        s = self.scenario
        for ctx in s.contexts:
            size = math.prod(len(s.outcomes(m)) for m in ctx)
            out[ctx] = range(start, start + size)
            start += size
        return out

    def __len__(self) -> int:
        return len(self.entries)

    def position(self, context: Iterable[str], joint: Sequence[str]) -> int:
        """Position of an event given in any member order."""
        context = tuple(context)
        if len(context) != len(joint):
            raise ScenarioError(f"context {context} and outcome {tuple(joint)} differ in length")
        pairs = dict(zip(context, joint))
        ctx = self.scenario.sort_members(context)
        key = (ctx, tuple(str(pairs[m]) for m in ctx))
        try:
            return self.lookup[key]
        except KeyError:
            raise ScenarioError(f"no event {key} in the scenario's maximal contexts") from None


@lru_cache(maxsize=256)
def event_index(s: Scenario) -> EventIndex:
    return EventIndex(s)


def ambient_dimension(s: Scenario) -> int:
    return sum(math.prod(len(s.outcomes(m)) for m in ctx) for ctx in s.contexts)


@dataclass(frozen=True)
class CorrelationVector:
    """Exact rational vector in a scenario's correlation space."""

    index: EventIndex
    values: tuple[Rational, ...]

    def __post_init__(self):
        if len(self.values) != len(self.index):
            raise IndexMismatchError(f"expected {len(self.index)} values, got {len(self.values)}")

    @classmethod
    def from_map(cls, s: Scenario, values: Mapping[Event, Rational]) -> "CorrelationVector":
        idx = event_index(s)
        vals = [Fraction(0)] * len(idx)
        for (ctx, joint), v in values.items():
            vals[idx.position(ctx, joint)] = Fraction(v)
        return cls(idx, tuple(vals))

    @classmethod
    def uniform(cls, s: Scenario) -> "CorrelationVector":
        idx = event_index(s)
        vals = []
        for ctx, rng in idx.slices.items():
            vals.extend([Fraction(1, len(rng))] * len(rng))
        return cls(idx, tuple(vals))

    @property
    def scenario(self) -> Scenario:
        return self.index.scenario

    def __getitem__(self, event: Event) -> Rational:
        ctx, joint = event
        return self.values[self.index.position(ctx, joint)]

    def _check(self, other: "CorrelationVector"):
        if self.index.scenario != other.index.scenario:
            raise IndexMismatchError("vectors belong to different scenarios")

    def __add__(self, other: "CorrelationVector") -> "CorrelationVector":
        self._check(other)
        return CorrelationVector(self.index, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "CorrelationVector") -> "CorrelationVector":
        self._check(other)
        return CorrelationVector(self.index, tuple(a - b for a, b in zip(self.values, other.values)))

    def scale(self, c: Rational) -> "CorrelationVector":
        return CorrelationVector(self.index, tuple(c * a for a in self.values))

    def dot(self, other: "CorrelationVector") -> Rational:
        self._check(other)
        return sum((a * b for a, b in zip(self.values, other.values)), Fraction(0))

    def is_zero(self) -> bool:
        return not any(self.values)

    def is_normalized(self) -> bool:
        return all(sum(self.values[i] for i in rng) == 1 for rng in self.index.slices.values())

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.values)

    def is_correlation(self) -> bool:
        return self.is_normalized() and self.is_nonnegative()


def combine(vectors: Sequence[CorrelationVector], weights: Sequence[Rational]) -> CorrelationVector:
    """Linear combination ``sum_i weights[i] * vectors[i]``."""
    if not vectors:
        raise ValueError("no vectors to combine")
    idx = vectors[0].index
    acc = [Fraction(0)] * len(idx)
    for vec, w in zip(vectors, weights):
        if vec.index.scenario != idx.scenario:
            raise IndexMismatchError("vectors belong to different scenarios")
        if w:
            for i, x in enumerate(vec.values):
                if x:
                    acc[i] += w * x
    return CorrelationVector(idx, tuple(acc))


# -- vertices ----------------------------------------------------------------


@dataclass(frozen=True)
class Vertex:
    """Deterministic correlation of a global assignment.

    ``assignment`` is aligned with ``scenario.measurements``; ``support`` lists
    the position of the single 1 in each maximal context.
    """

    index: EventIndex
    assignment: tuple[str, ...]
    support: tuple[int, ...]

    @property
    def scenario(self) -> Scenario:
        return self.index.scenario

    def as_dict(self) -> dict[str, str]:
        return dict(zip(self.index.scenario.measurements, self.assignment))

    @cached_property
    def vector(self) -> CorrelationVector:
        vals = [0] * len(self.index)
        for i in self.support:
            vals[i] = 1
        return CorrelationVector(self.index, tuple(vals))

    def label(self) -> str:
        return "".join(self.assignment) if all(len(a) == 1 for a in self.assignment) else ",".join(self.assignment)


def vertex_of(s: Scenario, assignment: Mapping[str, str] | Sequence[str]) -> Vertex:
    if isinstance(assignment, Mapping):
        missing = [m for m in s.measurements if m not in assignment]
        if missing:
            raise ScenarioError(f"assignment misses measurement(s) {missing}")
        extra = [m for m in assignment if m not in s.position]
        if extra:
            raise ScenarioError(f"assignment names unknown measurement(s) {extra}")
        values = tuple(str(assignment[m]) for m in s.measurements)
    else:
        values = tuple(str(a) for a in assignment)
        if len(values) != len(s.measurements):
            raise ScenarioError("assignment length does not match the number of measurements")
    for m, a in zip(s.measurements, values):
        if a not in s.outcomes(m):
            raise ScenarioError(f"{a!r} is not an outcome of measurement {m!r}")
    return _vertex(event_index(s), values)


def _vertex(idx: EventIndex, values: tuple[str, ...]) -> Vertex:
    s = idx.scenario
    lam = dict(zip(s.measurements, values))
    support = tuple(idx.lookup[(ctx, tuple(lam[m] for m in ctx))] for ctx in s.contexts)
    return Vertex(idx, values, support)


def vertex_count(s: Scenario) -> int:
    return math.prod(len(o) for o in s.outcome_sets)


def enumerate_vertices(s: Scenario, cap: int = DEFAULT_VERTEX_CAP) -> tuple[Vertex, ...]:
    """All vertices in mixed-radix order of assignments (first measurement slowest)."""
    count = vertex_count(s)
    if count > cap:
        raise CapExceededError(f"{count} vertices exceed the cap of {cap}")
    return _enumerate(s)


@lru_cache(maxsize=64)
def _enumerate(s: Scenario) -> tuple[Vertex, ...]:
    idx = event_index(s)
    return tuple(_vertex(idx, values) for values in itertools.product(*s.outcome_sets))


def affine_rank(vectors: Sequence[CorrelationVector | Vertex]) -> int:
    """Number of affinely independent vectors in a maximal such subset."""
    if not vectors:
        return 0
    rows = [_values(v) for v in vectors]
    scen = vectors[0].index.scenario
    if any(v.index.scenario != scen for v in vectors):
        raise IndexMismatchError("vectors belong to different scenarios")
    return linalg.affine_rank_of(rows)


def affine_basis(vectors: Sequence[CorrelationVector | Vertex]) -> list[int]:
    return linalg.affine_basis([_values(v) for v in vectors])


def _values(v: CorrelationVector | Vertex) -> tuple[Rational, ...]:
    return v.vector.values if isinstance(v, Vertex) else v.values


@lru_cache(maxsize=64)
def _nc_dimension(s: Scenario) -> int:
    return affine_rank(_enumerate(s)) - 1


def nc_dimension(s: Scenario, cap: int = DEFAULT_VERTEX_CAP) -> int:
    enumerate_vertices(s, cap)
    return _nc_dimension(s)


# -- no-disturbance ---------------------------------------------------------


def _marginal(q: CorrelationVector, ctx: Context, sub: Context) -> dict[tuple[str, ...], Rational]:
    idx = q.index
    keep = [ctx.index(m) for m in sub]
    out: dict[tuple[str, ...], Rational] = {}
    for i in idx.slices[ctx]:
        joint = idx.entries[i][1]
        key = tuple(joint[k] for k in keep)
        out[key] = out.get(key, 0) + q.values[i]
    return out


def check_no_disturbance(q: CorrelationVector) -> bool:
    """True iff every pair of maximal contexts agrees on its overlap marginal."""
    s = q.scenario
    ctxs = s.contexts
    for a, b in itertools.combinations(ctxs, 2):
        inter = tuple(m for m in a if m in b)
        if _marginal(q, a, inter) != _marginal(q, b, inter):
            return False
    return True


def marginal(q: CorrelationVector, members: Iterable[str]) -> dict[tuple[str, ...], Rational]:
    """Distribution of ``q`` on a (partial) context, read from its first containing context."""
    s = q.scenario
    sub = s.sort_members(members)
    return _marginal(q, s.containing_context(sub), sub)


# -- membership --------------------------------------------------------------


@dataclass(frozen=True)
class MembershipResult:
    """Outcome of :func:`is_noncontextual`.

    Exactly one of ``weights`` (assignment -> weight, zero weights omitted)
    and ``separating`` (an inequality valid on the polytope and violated by
    the correlation) is set.
    """

    noncontextual: bool
    weights: dict[tuple[str, ...], Fraction] | None
    separating: "object | None"


def is_noncontextual(q: CorrelationVector, cap: int = DEFAULT_VERTEX_CAP) -> MembershipResult:
    from .inequality import Inequality

    if not q.is_correlation():
        raise DisturbanceError("not a normalized nonnegative correlation")
    if not check_no_disturbance(q):
        raise DisturbanceError("correlation violates no-disturbance")
    s = q.scenario
    verts = enumerate_vertices(s, cap)
    res = convex_combination([v.vector.values for v in verts], q.values)
    if res.feasible:
        used = [(v, w) for v, w in zip(verts, res.weights) if w]
        weights = {v.assignment: w for v, w in used}
        recon = combine([v.vector for v, _ in used], [w for _, w in used])
        if recon.values != tuple(Fraction(x) for x in q.values):
            raise RuntimeError("simplex weights do not reconstruct the correlation")
        return MembershipResult(True, weights, None)
    y = res.farkas
    n = len(s.contexts)
    shift = y[-1] / n
    coeffs = tuple(-yi - shift for yi in y[:-1])
    sep = Inequality(s, coeffs)
    if any(sep.value_at(v) < 0 for v in verts) or sep.value(q) >= 0:
        raise RuntimeError("Farkas certificate failed verification")
    return MembershipResult(False, None, sep)


# -- maps between scenarios -------------------------------------------------


def marginalize(q: CorrelationVector, ext: MeasurementExtension) -> CorrelationVector:
    """Forget the added measurement: correlation on ``ext.base``."""
    if q.scenario != ext.scenario:
        raise IndexMismatchError("correlation is not on the extended scenario")
    if not check_no_disturbance(q):
        raise DisturbanceError("marginalization needs a no-disturbance correlation")
    base_idx = event_index(ext.base)
    src = q.index
    vals: list[Rational] = [Fraction(0)] * len(base_idx)
    for ctx in ext.old:
        for i in src.slices[ctx]:
            vals[base_idx.lookup[src.entries[i]]] = q.values[i]
    a = ext.measurement
    for ctx in ext.mc:
        rest = ext.rest(ctx)
        k = ctx.index(a)
        for i in src.slices[ctx]:
            joint = src.entries[i][1]
            j = base_idx.lookup[(rest, joint[:k] + joint[k + 1:])]
            vals[j] += q.values[i]
    return CorrelationVector(base_idx, tuple(vals))


def coarse_grain(q: CorrelationVector, ext: OutcomeExtension, club_with: str) -> CorrelationVector:
    """Merge the new outcome into ``club_with``: correlation on ``ext.base``."""
    if q.scenario != ext.scenario:
        raise IndexMismatchError("correlation is not on the extended scenario")
    a = ext.measurement
    if club_with == ext.new_outcome or club_with not in ext.base.outcomes(a):
        raise ScenarioError(f"{club_with!r} is not a pre-existing outcome of {a!r}")
    base_idx = event_index(ext.base)
    src = q.index
    vals: list[Rational] = [Fraction(0)] * len(base_idx)
    for i, (ctx, joint) in enumerate(src.entries):
        if a in ctx:
            k = ctx.index(a)
            if joint[k] == ext.new_outcome:
                joint = joint[:k] + (club_with,) + joint[k + 1:]
        vals[base_idx.lookup[(ctx, joint)]] += q.values[i]
    return CorrelationVector(base_idx, tuple(vals))


def restrict_assignment(v: Vertex, s: Scenario) -> Vertex:
    """Vertex of sub-scenario ``s`` obtained by restricting the assignment of ``v``."""
    lam = v.as_dict()
    return vertex_of(s, {m: lam[m] for m in s.measurements})
