"""Measurement scenarios: compatibility graphs with outcome sets.

A scenario is immutable.  Measurements keep their declaration order, which is
used everywhere for indexing: members of a context are sorted by it, contexts
are sorted lexicographically by the positions of their members, and joint
outcomes are listed in mixed-radix order over the sorted members.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import ScenarioError

MAX_MEASUREMENTS = 32

Context = tuple[str, ...]


@dataclass(frozen=True)
class Scenario:
    """Finite set of measurements, their outcomes and a compatibility relation.

    ``compatible`` holds unordered pairs, each stored as a 2-tuple ordered by
    declaration position.  Reflexivity is implicit.
    """

    measurements: tuple[str, ...]
    outcome_sets: tuple[tuple[str, ...], ...]
    compatible: frozenset[tuple[str, str]] = field(default_factory=frozenset)

    def __post_init__(self):
        if len(set(self.measurements)) != len(self.measurements):
            raise ScenarioError("duplicate measurement names")
        if len(self.measurements) > MAX_MEASUREMENTS:
            raise ScenarioError(
                f"{len(self.measurements)} measurements exceed the cap of {MAX_MEASUREMENTS}"
            )
        if len(self.outcome_sets) != len(self.measurements):
            raise ScenarioError("one outcome set is required per measurement")
        for name, outs in zip(self.measurements, self.outcome_sets):
            if not outs:
                raise ScenarioError(f"measurement {name!r} has no outcomes")
            if len(set(outs)) != len(outs):
                raise ScenarioError(f"duplicate outcome labels for measurement {name!r}")
        pos = {m: i for i, m in enumerate(self.measurements)}
        for a, b in self.compatible:
            if a not in pos or b not in pos:
                raise ScenarioError(f"compatibility pair ({a!r}, {b!r}) names an unknown measurement")
            if a == b:
                raise ScenarioError(f"self-pair for measurement {a!r}")
            if pos[a] > pos[b]:
                raise ScenarioError(f"pair ({a!r}, {b!r}) is not stored in canonical order")

    @classmethod
    def build(
        cls,
        outcomes: Mapping[str, Sequence[str]] | Sequence[tuple[str, Sequence[str]]],
        compatible: Iterable[Iterable[str]] = (),
    ) -> "Scenario":
        """Build from ``{name: outcomes}`` (insertion order kept) and any pair list."""
        items = list(outcomes.items()) if isinstance(outcomes, Mapping) else list(outcomes)
        names = tuple(str(n) for n, _ in items)
        outs = tuple(tuple(str(o) for o in os) for _, os in items)
        pos = {m: i for i, m in enumerate(names)}
        pairs = set()
        for pair in compatible:
            a, b = (str(x) for x in pair)
            if a not in pos or b not in pos:
                raise ScenarioError(f"compatibility pair ({a!r}, {b!r}) names an unknown measurement")
            if a == b:
                raise ScenarioError(f"self-pair for measurement {a!r}")
            pairs.add((a, b) if pos[a] < pos[b] else (b, a))
        return cls(names, outs, frozenset(pairs))

    # -- basic queries ---------------------------------------------------

    @cached_property
    def position(self) -> dict[str, int]:
        return {m: i for i, m in enumerate(self.measurements)}

    @cached_property
    def _outcome_map(self) -> dict[str, tuple[str, ...]]:
        return dict(zip(self.measurements, self.outcome_sets))

    @cached_property
    def adjacency(self) -> dict[str, frozenset[str]]:
        adj: dict[str, set[str]] = {m: set() for m in self.measurements}
        for a, b in self.compatible:
            adj[a].add(b)
            adj[b].add(a)
        return {m: frozenset(n) for m, n in adj.items()}

    def outcomes(self, measurement: str) -> tuple[str, ...]:
        try:
            return self._outcome_map[measurement]
        except KeyError:
            raise ScenarioError(f"unknown measurement {measurement!r}") from None

    def are_compatible(self, a: str, b: str) -> bool:
        return a == b or b in self.adjacency[a]

    def sort_members(self, members: Iterable[str]) -> Context:
        try:
            return tuple(sorted(set(members), key=self.position.__getitem__))
        except KeyError as exc:
            raise ScenarioError(f"unknown measurement {exc.args[0]!r}") from None

    def context_key(self, ctx: Context) -> tuple[int, ...]:
        return tuple(self.position[m] for m in ctx)

    def is_context(self, members: Iterable[str]) -> bool:
        members = list(members)
        return all(self.are_compatible(a, b) for a, b in combinations(members, 2))

    @cached_property
    def contexts(self) -> tuple[Context, ...]:
        return tuple(maximal_contexts(self))

    @cached_property
    def _context_sets(self) -> frozenset[frozenset[str]]:
        return frozenset(frozenset(c) for c in self.contexts)

    def is_maximal_context(self, members: Iterable[str]) -> bool:
        return frozenset(members) in self._context_sets

    def containing_context(self, members: Iterable[str]) -> Context:
        """Canonically smallest maximal context that contains ``members``."""
        want = set(members)
        for ctx in self.contexts:
            if want.issubset(ctx):
                return ctx
        raise ScenarioError(f"{sorted(want)} is not contained in any maximal context")

    def __str__(self) -> str:
        ctxs = ", ".join("{" + ",".join(c) + "}" for c in self.contexts)
        return f"Scenario({len(self.measurements)} measurements; contexts {ctxs})"


# -- cliques ---------------------------------------------------------------


def _bron_kerbosch(adj: dict[int, set[int]], r: list[int], p: set[int], x: set[int], out: list):
    if not p and not x:
        out.append(tuple(sorted(r)))
        return
    pivot = max(p | x, key=lambda u: len(adj[u] & p))
    for v in sorted(p - adj[pivot]):
        _bron_kerbosch(adj, r + [v], p & adj[v], x & adj[v], out)
        p = p - {v}
        x = x | {v}


def maximal_cliques(vertices: Sequence[str], adjacency: Mapping[str, Iterable[str]]) -> list[tuple[str, ...]]:
    """Maximal cliques of the graph induced on ``vertices`` (order = rank).

    Isolated vertices give singleton cliques.  An empty vertex list gives no
    cliques.  Cliques are sorted internally and the list lexicographically,
    both by position in ``vertices``.
    """
    pos = {v: i for i, v in enumerate(vertices)}
    adj = {i: {pos[u] for u in adjacency[v] if u in pos and u != v} for v, i in pos.items()}
    found: list[tuple[int, ...]] = []
    if adj:
        _bron_kerbosch(adj, [], set(adj), set(), found)
    found.sort()
    return [tuple(vertices[i] for i in c) for c in found]


def maximal_contexts(s: Scenario) -> list[Context]:
    """All maximal contexts of ``s`` in canonical order."""
    return maximal_cliques(s.measurements, s.adjacency)


# -- extensions ------------------------------------------------------------


@dataclass(frozen=True)
class MeasurementExtension:
    """``base`` extended by a new measurement adjacent to ``neighbors``.

    The maximal contexts of the extended scenario are split into ``old``
    (without the new measurement), ``mc`` (new measurement appended to a base
    maximal context) and ``pc`` (appended to a partial base context, possibly
    the empty one).
    """

    base: Scenario
    scenario: Scenario
    measurement: str
    new_outcomes: tuple[str, ...]
    neighbors: frozenset[str]
    old: tuple[Context, ...]
    mc: tuple[Context, ...]
    pc: tuple[Context, ...]

    def rest(self, ctx: Context) -> Context:
        """``ctx`` with the new measurement removed."""
        return tuple(m for m in ctx if m != self.measurement)


def classify_contexts(base: Scenario, extended: Scenario, measurement: str):
    old, mc, pc = [], [], []
    for ctx in extended.contexts:
        if measurement not in ctx:
            old.append(ctx)
        elif base.is_maximal_context(m for m in ctx if m != measurement):
            mc.append(ctx)
        else:
            pc.append(ctx)
    return tuple(old), tuple(mc), tuple(pc)


def extend_with_measurement(
    s: Scenario, name: str, outcomes: Sequence[str], neighbors: Iterable[str]
) -> MeasurementExtension:
    name = str(name)
    if name in s.position:
        raise ScenarioError(f"measurement {name!r} already exists")
    neighbors = frozenset(str(n) for n in neighbors)
    unknown = sorted(neighbors - set(s.measurements))
    if unknown:
        raise ScenarioError(f"unknown neighbor(s) {unknown}")
    outs = tuple(str(o) for o in outcomes)
    extended = Scenario(
        s.measurements + (name,),
        s.outcome_sets + (outs,),
        s.compatible | {(n, name) for n in neighbors},
    )
    old, mc, pc = classify_contexts(s, extended, name)
    return MeasurementExtension(s, extended, name, outs, neighbors, old, mc, pc)


@dataclass(frozen=True)
class OutcomeExtension:
    """``base`` with ``new_outcome`` appended to the outcomes of ``measurement``."""

    base: Scenario
    scenario: Scenario
    measurement: str
    new_outcome: str


def extend_with_outcome(s: Scenario, measurement: str, new_outcome: str) -> OutcomeExtension:
    measurement, new_outcome = str(measurement), str(new_outcome)
    outs = s.outcomes(measurement)
    if new_outcome in outs:
        raise ScenarioError(f"outcome {new_outcome!r} already exists for {measurement!r}")
    i = s.position[measurement]
    sets = list(s.outcome_sets)
    sets[i] = outs + (new_outcome,)
    return OutcomeExtension(s, Scenario(s.measurements, tuple(sets), s.compatible), measurement, new_outcome)


def restrict(s: Scenario, keep: Iterable[str]) -> Scenario:
    """Induced sub-scenario on ``keep`` (declaration order preserved)."""
    keep = set(keep)
    unknown = sorted(keep - set(s.measurements))
    if unknown:
        raise ScenarioError(f"unknown measurement(s) {unknown}")
    names = tuple(m for m in s.measurements if m in keep)
    return Scenario(
        names,
        tuple(s.outcomes(m) for m in names),
        frozenset(p for p in s.compatible if p[0] in keep and p[1] in keep),
    )


# -- induced cycles ----------------------------------------------------------


def _canonical_cycle(members: Sequence[str], s: Scenario) -> list[str]:
    start = members[0]
    inside = set(members)
    nbrs = sorted((n for n in s.adjacency[start] if n in inside), key=s.position.__getitem__)
    cycle, prev, cur = [start], start, nbrs[0]
    while cur != start:
        cycle.append(cur)
        nxt = next(n for n in s.adjacency[cur] if n in inside and n != prev)
        prev, cur = cur, nxt
    return cycle


def find_induced_cycle(s: Scenario) -> list[str] | None:
    """Shortest chordless cycle of length >= 4, or None for chordal graphs.

    Among shortest holes the one with the lexicographically smallest member
    set is returned, starting at its first member and continuing towards the
    smaller of that member's two cycle neighbours.
    """
    order = list(s.measurements)
    n = len(order)
    adj = s.adjacency

    def search(length: int) -> list[str] | None:
        chosen: list[str] = []
        deg: dict[str, int] = {}

        def ok_to_add(v: str) -> bool:
            k = 0
            for u in chosen:
                if u in adj[v]:
                    if deg[u] >= 2:
                        return False
                    k += 1
            return k <= 2

        def rec(start: int) -> list[str] | None:
            if len(chosen) == length:
                if all(deg[u] == 2 for u in chosen) and _connected(chosen, adj):
                    return list(chosen)
                return None
            for i in range(start, n - (length - len(chosen)) + 1):
                v = order[i]
                if not ok_to_add(v):
                    continue
                for u in chosen:
                    if u in adj[v]:
                        deg[u] += 1
                deg[v] = sum(1 for u in chosen if u in adj[v])
                chosen.append(v)
                res = rec(i + 1)
                chosen.pop()
                del deg[v]
                for u in chosen:
                    if u in adj[v]:
                        deg[u] -= 1
                if res is not None:
                    return res
            return None

        return rec(0)

    for length in range(4, n + 1):
        found = search(length)
        if found is not None:
            return _canonical_cycle(found, s)
    return None


def _connected(vertices: Sequence[str], adj: Mapping[str, frozenset[str]]) -> bool:
    inside = set(vertices)
    seen = {vertices[0]}
    stack = [vertices[0]]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u in inside and u not in seen:
                seen.add(u)
                stack.append(u)
    return seen == inside
