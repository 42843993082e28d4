"""Canned pipelines that rebuild the worked examples and check their claims."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import catalog
from .errors import ExclusionError
from .inequality import (
    Inequality,
    contributing_measurements,
    equivalent,
    format_terms,
    from_terms,
    is_facet,
    saturating_vertices,
    to_terms,
)
from .lifting import CASE_I, CASE_II, apply_step, lift_outcome, sequential_lift, trace_out, unlift_measurement
from .polytope import DEFAULT_VERTEX_CAP, ambient_dimension, enumerate_vertices, nc_dimension, vertex_of
from .scenario import extend_with_measurement, extend_with_outcome


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def chsh_antiheptagon(cap: int = DEFAULT_VERTEX_CAP) -> list[Check]:
    checks = []
    ineq = catalog.chsh_inequality()
    checks.append(Check("CHSH is a facet of the 4-cycle", is_facet(ineq, cap).is_facet))
    for step in catalog.ANTIHEPTAGON_STEPS:
        results = apply_step(ineq, step, cap)
        kinds = [r.record.kind for r in results]
        checks.append(Check(f"adding {step.name} uses case I", kinds == [CASE_I], f"kinds {kinds}"))
        ineq = results[0].inequality
        report = is_facet(ineq, cap)
        checks.append(Check(f"facet after adding {step.name}", report.is_facet, report.verdict))
    s = ineq.scenario
    checks.append(Check("final scenario is the anti-heptagon", s == catalog.antiheptagon_scenario()))
    checks.append(
        Check(
            "maximal contexts match",
            s.contexts == catalog.ANTIHEPTAGON_CONTEXTS,
            " ".join("".join(c) for c in s.contexts),
        )
    )
    n_vert = len(enumerate_vertices(s, cap))
    checks.append(Check("128 vertices", n_vert == 128, str(n_vert)))
    checks.append(Check("ambient dimension 56", ambient_dimension(s) == 56, str(ambient_dimension(s))))
    return checks


def kcbs_c5_3out(cap: int = DEFAULT_VERTEX_CAP) -> list[Check]:
    checks = []
    kcbs = catalog.kcbs_inequality()
    checks.append(Check("KCBS is a facet of the 5-cycle", is_facet(kcbs, cap).is_facet))
    ineq = kcbs
    for n, step in enumerate(catalog.kcbs_outcome_steps()):
        ineq = apply_step(ineq, step, cap)[0].inequality
        report = is_facet(ineq, cap)
        checks.append(Check(f"facet after outcome step {n + 1}", report.is_facet, report.verdict))
        if n == 0:
            first = from_terms(ineq.scenario, catalog.kcbs_first_clubbed_terms(), "leq", 2)
            checks.append(Check("step 1 gives the clubbed KCBS with p(02|40)", ineq == first, format_terms(to_terms(ineq, "leq", 2))))
    clubbed = from_terms(catalog.trichotomic_cycle_scenario(), catalog.kcbs_clubbed_terms(), "leq", 2)
    checks.append(Check("step 5 gives the fully clubbed KCBS", ineq == clubbed, format_terms(to_terms(ineq, "leq", 2))))
    n_vert = len(enumerate_vertices(ineq.scenario, cap))
    checks.append(Check("243 vertices", n_vert == 243, str(n_vert)))
    alt = sequential_lift(kcbs, catalog.kcbs_outcome_steps(("0", "1", "1", "1", "1")), cap)[0].inequality
    checks.append(Check("alternative clubbing gives a facet", is_facet(alt, cap).is_facet))
    checks.append(Check("alternative clubbing is inequivalent", not equivalent(alt, ineq, cap)))
    return checks


def case_dichotomy(cap: int = DEFAULT_VERTEX_CAP) -> list[Check]:
    checks = []
    src = catalog.traced_chsh_inequality()
    checks.append(Check("source inequality is a facet", is_facet(src, cap).is_facet))
    k = contributing_measurements(src, cap)
    checks.append(Check("measurement 4 does not contribute", k == frozenset("0123"), ",".join(sorted(k))))
    results = apply_step(src, catalog.POST_SELECTION_STEP, cap)
    checks.append(Check("case II with one lift per outcome", [r.record.kind for r in results] == [CASE_II] * 2))
    t = results[0].scenario
    total = None
    for r in results:
        a_k = r.record.chosen_outcome
        expected = from_terms(t, catalog.post_selected_chsh_terms(a_k))
        checks.append(Check(f"lift at 5={a_k} matches the post-selected CHSH", r.inequality == expected))
        checks.append(Check(f"lift at 5={a_k} is a facet", is_facet(r.inequality, cap).is_facet))
        back = unlift_measurement(r)
        checks.append(Check(f"unlift at 5={a_k} recovers the source", equivalent(back, src, cap)))
        total = r.inequality if total is None else total + r.inequality
    ext = extend_with_measurement(src.scenario, catalog.POST_SELECTION_STEP.name, catalog.POST_SELECTION_STEP.outcomes, catalog.POST_SELECTION_STEP.neighbors)
    traced = Inequality(t, tuple(trace_out(src, ext)))
    report = is_facet(traced, cap)
    checks.append(Check("trace-out is valid", report.valid))
    checks.append(Check("trace-out is not a facet", report.valid and not report.is_facet, report.verdict))
    same = all(traced.value_at(v) == total.value_at(v) for v in enumerate_vertices(t, cap))
    checks.append(Check("trace-out equals the sum of the two lifts on every vertex", same))
    for r in results:
        a_k = r.record.chosen_outcome
        oext = extend_with_outcome(t, "5", "2")
        try:
            lift_outcome(r.inequality, oext, a_k, cap)
            excluded = False
        except ExclusionError:
            excluded = True
        checks.append(Check(f"clubbing a new outcome of 5 with {a_k} is excluded", excluded))
    return checks


def small_gallery(cap: int = DEFAULT_VERTEX_CAP) -> list[Check]:
    checks = []
    s, t = catalog.incompatible_pair_and_triple()
    dims = (nc_dimension(s, cap), nc_dimension(t, cap))
    checks.append(Check("incompatible pair/triple dimensions 2 -> 3", dims == (2, 3), str(dims)))
    v = {lab: vertex_of(s, lab).vector for lab in ("00", "01", "10", "11")}
    dep = v["00"] - v["01"] + v["11"] - v["10"]
    checks.append(Check("affine dependency v00 - v01 + v11 - v10 = 0", dep.is_zero()))
    src = catalog.square_facet_inequality()
    sat = [x.label() for x in saturating_vertices(src, cap)]
    checks.append(Check("square facet saturated by v10 and v11", sat == ["10", "11"], " ".join(sat)))
    (lifted,) = apply_step(src, catalog.ADD_INCOMPATIBLE_C, cap)
    sat_t = [x.label() for x in saturating_vertices(lifted.inequality, cap)]
    checks.append(Check("case I used", lifted.record.kind == CASE_I))
    checks.append(
        Check("lift saturated by the extensions of v10 and v11", sat_t == ["100", "101", "110", "111"], " ".join(sat_t))
    )
    checks.append(Check("lift is a facet of the triple", is_facet(lifted.inequality, cap).is_facet))

    src_b = catalog.segment_facet_inequality()
    lifts = apply_step(src_b, catalog.ADD_COMPATIBLE_B, cap)
    dims = (nc_dimension(src_b.scenario, cap), nc_dimension(lifts[0].scenario, cap))
    checks.append(Check("single/compatible pair dimensions 1 -> 3", dims == (1, 3), str(dims)))
    sat = [x.label() for x in saturating_vertices(src_b, cap)]
    checks.append(Check("segment facet saturated by v0", sat == ["0"], " ".join(sat)))
    for r in lifts:
        a_k = r.record.chosen_outcome
        sat_t = [x.label() for x in saturating_vertices(r.inequality, cap)]
        # saturated by both extensions of v0 plus the extension of v1 with B != a_k
        other = "1" + ("1" if a_k == "0" else "0")
        expected = sorted(["00", "01", other])
        checks.append(Check(f"case II at B={a_k} saturated by 3 of 4 vertices", sat_t == expected, " ".join(sat_t)))
        checks.append(Check(f"case II at B={a_k} is a facet of the tetrahedron", is_facet(r.inequality, cap).is_facet))
    return checks


PIPELINES: dict[str, Callable[[int], list[Check]]] = {
    "chsh-antiheptagon": chsh_antiheptagon,
    "kcbs-c5-3out": kcbs_c5_3out,
    "fig2-caseII": case_dichotomy,
    "fig1-gallery": small_gallery,
}


def run(name: str, cap: int = DEFAULT_VERTEX_CAP) -> list[Check]:
    try:
        pipeline = PIPELINES[name]
    except KeyError:
        raise KeyError(f"unknown pipeline {name!r}; known: {', '.join(PIPELINES)}") from None
    return pipeline(cap)
