"""Lifting inequalities to extended scenarios, and back.

Three constructions are provided:

* case I (trace-out): the new measurement ``A`` is incompatible with some
  contributing measurement; the lifted inequality ignores ``A``'s outcome;
* case II (post-selection): ``A`` is compatible with every contributing
  measurement; the lifted inequality tests the source only when ``A`` gives
  the chosen outcome ``a_k``;
* outcome lifting: a new outcome ``a_0`` is clubbed together with ``a_k``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import ExclusionError, LiftError, NcliftError, ScenarioError
from .inequality import EffectiveForm, Inequality, effective_form, contributing_measurements
from .polytope import DEFAULT_VERTEX_CAP, enumerate_vertices, event_index
from .scenario import (
    MeasurementExtension,
    OutcomeExtension,
    extend_with_measurement,
    extend_with_outcome,
)

CASE_I = "measurement-I"
CASE_II = "measurement-II"
OUTCOME = "outcome"


@dataclass(frozen=True)
class LiftRecord:
    """How a lifted inequality was obtained from ``source``."""

    kind: str
    extension: MeasurementExtension | OutcomeExtension
    source: Inequality
    chosen_outcome: str | None = None

    @property
    def clubbed_outcome(self) -> str | None:
        """The new outcome ``a_0`` of an outcome lift."""
        return self.extension.new_outcome if self.kind == OUTCOME else None

    def describe(self) -> dict:
        ext = self.extension
        if isinstance(ext, MeasurementExtension):
            out = {
                "op": "add_measurement",
                "name": ext.measurement,
                "outcomes": list(ext.new_outcomes),
                "neighbors": [m for m in ext.base.measurements if m in ext.neighbors],
                "case": "I" if self.kind == CASE_I else "II",
            }
            if self.kind == CASE_II:
                out["a_k"] = self.chosen_outcome
            return out
        return {
            "op": "add_outcome",
            "measurement": ext.measurement,
            "new": ext.new_outcome,
            "club_with": self.chosen_outcome,
        }


@dataclass(frozen=True)
class LiftedInequality:
    inequality: Inequality
    record: LiftRecord

    @property
    def scenario(self):
        return self.inequality.scenario


def _check_base(ineq: Inequality, base) -> None:
    if ineq.scenario != base:
        raise LiftError("inequality does not live on the base scenario of the extension")


def _record(kind, ext, source: Inequality, a_k=None) -> LiftRecord:
    return LiftRecord(kind, ext, source, a_k)


def _finish(coeffs: Sequence[Fraction], record: LiftRecord) -> LiftedInequality:
    src = record.source
    ineq = Inequality(record.extension.scenario, tuple(coeffs), src.provenance + (record,))
    return LiftedInequality(ineq, record)


# -- measurement lifting ------------------------------------------------------


def requires_case_II(contributing: Iterable[str], ext: MeasurementExtension) -> bool:
    """True iff the new measurement is compatible with every contributing measurement."""
    return set(contributing) <= ext.neighbors


def trace_out(ineq: Inequality, ext: MeasurementExtension) -> list[Fraction]:
    """Case-I coefficients: copy ``b`` ignoring the new measurement's outcome.

    Valid for any source inequality; facet-preserving only when case I applies.
    """
    _check_base(ineq, ext.base)
    src = ineq.index
    idx = event_index(ext.scenario)
    coeffs = [Fraction(0)] * len(idx)
    for ctx in ext.old:
        for i in idx.slices[ctx]:
            coeffs[i] = ineq.coefficients[src.lookup[idx.entries[i]]]
    a = ext.measurement
    for ctx in ext.mc:
        rest = ext.rest(ctx)
        k = ctx.index(a)
        for i in idx.slices[ctx]:
            joint = idx.entries[i][1]
            coeffs[i] = ineq.coefficients[src.lookup[(rest, joint[:k] + joint[k + 1:])]]
    return coeffs


def lift_measurement_case_I(eff: EffectiveForm, ext: MeasurementExtension) -> LiftedInequality:
    if requires_case_II(eff.contributing, ext):
        raise LiftError(
            f"measurement {ext.measurement!r} is compatible with every contributing measurement; case II applies"
        )
    return _finish(trace_out(eff.source, ext), _record(CASE_I, ext, eff.source))


def post_select(eff: EffectiveForm, ext: MeasurementExtension, a_k: str) -> list[Fraction]:
    """Case-II coefficients: the effective table placed at ``A = a_k``.

    Each clique ``U`` of the effective table is charged to the first maximal
    clique ``U'`` of the neighbourhood of ``A`` containing it, i.e. to the
    context ``{A} + U'`` of the extended scenario.
    """
    _check_base(eff.source, ext.base)
    if a_k not in ext.new_outcomes:
        raise LiftError(f"{a_k!r} is not an outcome of {ext.measurement!r}")
    if not requires_case_II(eff.contributing, ext):
        raise LiftError(f"measurement {ext.measurement!r} is incompatible with a contributing measurement")
    s = ext.scenario
    a = ext.measurement
    idx = event_index(s)
    coeffs = [Fraction(0)] * len(idx)
    hosts = [tuple(m for m in ctx if m != a) for ctx in ext.mc + ext.pc]
    for u in eff.cliques:
        host = next(h for h in hosts if set(u).issubset(h))
        ctx = s.sort_members(host + (a,))
        for i in idx.slices[ctx]:
            joint = idx.entries[i][1]
            values = dict(zip(ctx, joint))
            if values[a] != a_k:
                continue
            coeffs[i] += eff.table[(u, tuple(values[m] for m in u))]
    return coeffs


def lift_measurement_case_II(eff: EffectiveForm, ext: MeasurementExtension, a_k: str) -> LiftedInequality:
    return _finish(post_select(eff, ext, a_k), _record(CASE_II, ext, eff.source, a_k))


def lift_measurement(
    ineq: Inequality, ext: MeasurementExtension, a_k: str | None = None, cap: int = DEFAULT_VERTEX_CAP
) -> list[LiftedInequality]:
    """Lift through ``ext``, choosing the case from the contributing measurements.

    Case I gives one result (``a_k`` is ignored).  Case II gives one result
    per outcome of the new measurement, or only the one for ``a_k``.
    """
    _check_base(ineq, ext.base)
    eff = effective_form(ineq, cap)
    if not requires_case_II(eff.contributing, ext):
        return [lift_measurement_case_I(eff, ext)]
    choices = ext.new_outcomes if a_k is None else (a_k,)
    return [lift_measurement_case_II(eff, ext, c) for c in choices]


# -- outcome lifting -----------------------------------------------------------


def club_outcome(ineq: Inequality, ext: OutcomeExtension, a_k: str) -> list[Fraction]:
    """Coefficients of ``b_* + b_{a_k}`` without the exclusion check."""
    _check_base(ineq, ext.base)
    a = ext.measurement
    if a_k == ext.new_outcome or a_k not in ext.base.outcomes(a):
        raise LiftError(f"{a_k!r} is not a pre-existing outcome of {a!r}")
    src = ineq.index
    idx = event_index(ext.scenario)
    coeffs = [Fraction(0)] * len(idx)
    for i, (ctx, joint) in enumerate(idx.entries):
        if a in ctx:
            k = ctx.index(a)
            if joint[k] == ext.new_outcome:
                joint = joint[:k] + (a_k,) + joint[k + 1:]
        coeffs[i] = ineq.coefficients[src.lookup[(ctx, joint)]]
    return coeffs


def exclusion_applies(ineq: Inequality, measurement: str, a_k: str, cap: int = DEFAULT_VERTEX_CAP) -> bool:
    """True iff clubbing with ``a_k`` cannot give a facet.

    This is the case when ``measurement`` is compatible with all other
    contributing measurements and every vertex off the face assigns ``a_k``
    to it: the inequality is then itself a post-selection on ``a_k``.
    """
    s = ineq.scenario
    others = contributing_measurements(ineq, cap) - {measurement}
    if not all(s.are_compatible(measurement, m) for m in others):
        return False
    verts = enumerate_vertices(s, cap)
    pos = s.position[measurement]
    return all(v.assignment[pos] == a_k for v in verts if ineq.value_at(v) != 0)


def lift_outcome(
    ineq: Inequality, ext: OutcomeExtension, a_k: str, cap: int = DEFAULT_VERTEX_CAP
) -> LiftedInequality:
    coeffs = club_outcome(ineq, ext, a_k)
    if exclusion_applies(ineq, ext.measurement, a_k, cap):
        raise ExclusionError(
            f"cannot club {ext.new_outcome!r} with {a_k!r} for {ext.measurement!r}: "
            f"{ext.measurement!r} is compatible with every contributing measurement and every "
            f"non-saturating vertex assigns it {a_k!r}, so the lift splits into two post-selected facets"
        )
    return _finish(coeffs, _record(OUTCOME, ext, ineq, a_k))


def lift_outcome_all(ineq: Inequality, ext: OutcomeExtension, cap: int = DEFAULT_VERTEX_CAP) -> list[LiftedInequality]:
    """Outcome lifts for every pre-existing outcome not ruled out by exclusion."""
    out = []
    for a_k in ext.base.outcomes(ext.measurement):
        if not exclusion_applies(ineq, ext.measurement, a_k, cap):
            out.append(_finish(club_outcome(ineq, ext, a_k), _record(OUTCOME, ext, ineq, a_k)))
    return out


# -- recovery ------------------------------------------------------------------


def unlift_measurement(lifted: LiftedInequality) -> Inequality:
    """Recover an inequality over the base scenario from a measurement lift."""
    record = lifted.record
    if record.kind not in (CASE_I, CASE_II):
        raise LiftError(f"cannot unlift a lift of kind {record.kind!r}")
    ext: MeasurementExtension = record.extension
    ineq = lifted.inequality
    if ineq.scenario != ext.scenario:
        raise LiftError("lifted inequality does not live on the extended scenario")
    idx = ineq.index
    base_idx = event_index(ext.base)
    a = ext.measurement
    out = [Fraction(0)] * len(base_idx)

    if record.kind == CASE_I:
        for ctx in ext.old:
            for i in idx.slices[ctx]:
                out[base_idx.lookup[idx.entries[i]]] = ineq.coefficients[i]
        for ctx in ext.mc:
            rest = ext.rest(ctx)
            k = ctx.index(a)
            seen: dict[int, Fraction] = {}
            for i in idx.slices[ctx]:
                joint = idx.entries[i][1]
                j = base_idx.lookup[(rest, joint[:k] + joint[k + 1:])]
                if seen.setdefault(j, ineq.coefficients[i]) != ineq.coefficients[i]:
                    raise LiftError(f"coefficients on {ctx} depend on the outcome of {a!r}")
                out[j] = ineq.coefficients[i]
        for ctx in ext.pc:
            if any(ineq.coefficients[i] for i in idx.slices[ctx]):
                raise LiftError(f"nonzero coefficients on the partial-context extension {ctx}")
        return Inequality(ext.base, tuple(out))

    a_k = record.chosen_outcome
    for ctx in ext.old:
        if any(ineq.coefficients[i] for i in idx.slices[ctx]):
            raise LiftError(f"nonzero coefficients on the context {ctx} without {a!r}")
    for ctx in ext.mc + ext.pc:
        u = ext.rest(ctx)
        k = ctx.index(a)
        host = ext.base.containing_context(u)
        free = [m for m in host if m not in u]
        for i in idx.slices[ctx]:
            joint = idx.entries[i][1]
            c = ineq.coefficients[i]
            if joint[k] != a_k:
                if c:
                    raise LiftError(f"nonzero coefficient at {a!r} != {a_k!r} on {ctx}")
                continue
            if not c:
                continue
            values = dict(zip(u, joint[:k] + joint[k + 1:]))
            for rest in itertools.product(*(ext.base.outcomes(m) for m in free)):
                full = dict(values, **dict(zip(free, rest)))
                out[base_idx.lookup[(host, tuple(full[m] for m in host))]] += c
    return Inequality(ext.base, tuple(out))


# -- sequential lifting ----------------------------------------------------------


@dataclass(frozen=True)
class AddMeasurement:
    name: str
    outcomes: tuple[str, ...]
    neighbors: tuple[str, ...]
    choice: str | None = None


@dataclass(frozen=True)
class AddOutcome:
    measurement: str
    new: str
    club_with: str | None = None


Step = Union[AddMeasurement, AddOutcome]


def apply_step(ineq: Inequality, step: Step, cap: int = DEFAULT_VERTEX_CAP) -> list[LiftedInequality]:
    """All lifts of ``ineq`` through one step (one per free choice)."""
    if isinstance(step, AddMeasurement):
        ext = extend_with_measurement(ineq.scenario, step.name, step.outcomes, step.neighbors)
        return lift_measurement(ineq, ext, step.choice, cap)
    if isinstance(step, AddOutcome):
        ext = extend_with_outcome(ineq.scenario, step.measurement, step.new)
        if step.club_with is not None:
            return [lift_outcome(ineq, ext, step.club_with, cap)]
        return lift_outcome_all(ineq, ext, cap)
    raise TypeError(f"unknown step {step!r}")


def sequential_lift(ineq: Inequality, steps: Sequence[Step], cap: int = DEFAULT_VERTEX_CAP) -> list[LiftedInequality]:
    """Fold the steps over ``ineq``; unresolved choices fan out into branches.

    Branches are ordered by their choices (outcome order at each step).
    Each result carries the full chain of records in its ``provenance``.
    Any failure is re-raised as :class:`LiftError` carrying the step index.
    """
    branches: list[Inequality] = [ineq]
    results: list[LiftedInequality] = []
    for n, step in enumerate(steps):
        results = []
        for b in branches:
            try:
                results.extend(apply_step(b, step, cap))
            except ExclusionError as exc:
                raise ExclusionError(f"step {n}: {exc}", step=n) from exc
            except (NcliftError, ScenarioError) as exc:
                raise LiftError(f"step {n}: {exc}", step=n) from exc
        if not results:
            raise LiftError(f"step {n}: every choice is excluded", step=n)
        branches = [r.inequality for r in results]
    return results


def provenance_chain(ineq: Inequality) -> list[dict]:
    return [r.describe() for r in ineq.provenance]
