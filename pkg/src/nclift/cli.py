"""Command-line front end: ``nclift info|check|lift|reproduce|noncontextual``.

Every command prints a JSON report on stdout.  Exit status is 0 when all
checks pass, 1 when a check or assertion fails and 2 on input errors.
"""
from __future__ import annotations

import argparse
import hashlib
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Sequence

from . import linalg
from .errors import CapExceededError, ExclusionError, LiftError, NcliftError
from .formats import (
    FormatError,
    correlation_to_json,
    display_form,
    dumps,
    format_rational,
    inequality_to_json,
    load_correlation,
    load_inequality,
    load_plan,
    load_scenario,
    step_to_json,
    write_json,
)
from .inequality import Inequality, format_terms, is_facet, to_terms
from .lifting import provenance_chain, sequential_lift
from .polytope import (
    DEFAULT_VERTEX_CAP,
    ambient_dimension,
    enumerate_vertices,
    is_noncontextual,
    nc_dimension,
    vertex_count,
)
from .reproduce import PIPELINES, run
from .scenario import find_induced_cycle

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def thread_count() -> int:
    """Worker threads allowed by ``NCLIFT_THREADS`` (1 when unset)."""
    raw = os.environ.get("NCLIFT_THREADS")
    if raw is None or raw.strip() == "":
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise NcliftError(f"NCLIFT_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise NcliftError(f"NCLIFT_THREADS must be a positive integer, got {raw!r}")
    return n


def ordered_map(fn: Callable, items: Sequence) -> list:
    """``map`` that may run in worker threads but keeps input order."""
    n = thread_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def digest(path: str | Path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _report(command: str, inputs: Sequence[str], results: dict, passed: bool) -> dict:
    return {
        "command": command,
        "inputs": {str(p): digest(p) for p in inputs},
        "passed": passed,
        "results": results,
    }


def _facet_results(ineq: Inequality, cap: int) -> dict:
    return is_facet(ineq, cap).as_dict()


def _certificate(ineq: Inequality, cap: int) -> dict:
    """Data a third party needs to re-check the facet verdict independently."""
    verts = enumerate_vertices(ineq.scenario, cap)
    values = [ineq.value_at(v) for v in verts]
    sat = [v for v, x in zip(verts, values) if x == 0]
    basis = linalg.affine_basis([v.vector.values for v in sat])
    off = next((v for v, x in zip(verts, values) if x != 0), None)
    negative = next((v for v, x in zip(verts, values) if x < 0), None)
    return {
        "coefficients": [format_rational(c) for c in ineq.coefficients],
        "event_order": [{"context": list(c), "outcome": list(j)} for c, j in ineq.index.entries],
        "saturating_affine_basis": [list(sat[i].assignment) for i in basis],
        "non_saturating_vertex": None if off is None else list(off.assignment),
        "violating_vertex": None if negative is None else list(negative.assignment),
        "measurements": list(ineq.scenario.measurements),
    }


# -- commands -------------------------------------------------------------------


def cmd_info(args) -> tuple[dict, int]:
    s = load_scenario(args.scenario)
    cycle = find_induced_cycle(s)
    results = {
        "measurements": [{"name": m, "outcomes": list(s.outcomes(m))} for m in s.measurements],
        "contexts": [list(c) for c in s.contexts],
        "context_count": len(s.contexts),
        "ambient_dimension": ambient_dimension(s),
        "vertex_count": vertex_count(s),
        "nc_dimension": nc_dimension(s, args.cap_vertices),
        "induced_cycle": cycle,
    }
    return _report("info", [args.scenario], results, True), EXIT_OK


def cmd_check(args) -> tuple[dict, int]:
    ineq = load_inequality(args.inequality)
    results = _facet_results(ineq, args.cap_vertices)
    if args.list_saturating and results["valid"]:
        verts = enumerate_vertices(ineq.scenario, args.cap_vertices)
        results["saturating"] = [list(v.assignment) for v in verts if ineq.value_at(v) == 0]
    if args.emit_certificate:
        write_json(args.emit_certificate, _certificate(ineq, args.cap_vertices))
    passed = args.expect is None or results["verdict"] == args.expect
    if args.expect is not None:
        results["expected_verdict"] = args.expect
    return _report("check", [args.inequality], results, passed), EXIT_OK if passed else EXIT_FAIL


def cmd_lift(args) -> tuple[dict, int]:
    start, steps = load_plan(args.plan)
    out_dir = Path(args.out_dir) if args.out_dir else Path(args.plan).parent / (Path(args.plan).stem + ".out")
    try:
        branches = sequential_lift(start, steps, args.cap_vertices)
    except ExclusionError as exc:
        results = {
            "error": "exclusion",
            "step": exc.step,
            "message": str(exc),
            "reason": "outcome lifting needs a source that is not a post-selection on the clubbed outcome",
        }
        return _report("lift", [args.plan], results, False), EXIT_FAIL
    except LiftError as exc:
        results = {"error": "lift", "step": exc.step, "message": str(exc)}
        return _report("lift", [args.plan], results, False), EXIT_FAIL

    out_dir.mkdir(parents=True, exist_ok=True)
    form = display_form(start)
    relation, bound = (form.relation, form.bound) if form is not None else ("geq", 0)
    outputs = []
    for n, branch in enumerate(branches):
        ineq = branch.inequality
        path = out_dir / f"lifted_{n}.json"
        write_json(path, inequality_to_json(ineq, relation, bound))
        outputs.append(
            {
                "file": str(path),
                "display": f"{format_terms(to_terms(ineq, relation, bound))} {'<=' if relation == 'leq' else '>='} {bound}",
                "provenance": provenance_chain(ineq),
            }
        )
    passed = True
    if args.verify:
        reports = ordered_map(lambda o: _facet_results(load_inequality(o["file"]), args.cap_vertices), outputs)
        for o, rep in zip(outputs, reports):
            o["check"] = rep
        passed = all(r["verdict"] == "facet" for r in reports)
    results = {"steps": [step_to_json(s) for s in steps], "outputs": outputs}
    return _report("lift", [args.plan], results, passed), EXIT_OK if passed else EXIT_FAIL


def cmd_reproduce(args) -> tuple[dict, int]:
    checks = run(args.name, args.cap_vertices)
    passed = all(c.passed for c in checks)
    results = {"name": args.name, "checks": [c.as_dict() for c in checks]}
    return _report("reproduce", [], results, passed), EXIT_OK if passed else EXIT_FAIL


def cmd_noncontextual(args) -> tuple[dict, int]:
    q = load_correlation(args.correlation)
    res = is_noncontextual(q, args.cap_vertices)
    s = q.scenario
    results: dict = {"noncontextual": res.noncontextual}
    if res.noncontextual:
        results["weights"] = [
            {"assignment": dict(zip(s.measurements, a)), "weight": format_rational(w)}
            for a, w in sorted(res.weights.items(), key=lambda kv: [s.outcomes(m).index(x) for m, x in zip(s.measurements, kv[0])])
        ]
    else:
        sep = res.separating
        results["separating_inequality"] = inequality_to_json(sep)["terms"]
        results["violation"] = format_rational(sep.value(q))
    if args.emit_certificate:
        cert = {"correlation": correlation_to_json(q), **{k: v for k, v in results.items() if k != "noncontextual"}}
        if not res.noncontextual:
            cert["separating_coefficients"] = [format_rational(c) for c in res.separating.coefficients]
        write_json(args.emit_certificate, cert)
    return _report("noncontextual", [args.correlation], results, True), EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nclift", description=__doc__.splitlines()[0])
    parser.add_argument("--cap-vertices", type=int, default=DEFAULT_VERTEX_CAP, help="maximum number of vertices to enumerate")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="describe a scenario")
    p.add_argument("scenario")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("check", help="validity and facet verdict of an inequality")
    p.add_argument("inequality")
    p.add_argument("--list-saturating", action="store_true")
    p.add_argument("--emit-certificate", metavar="PATH")
    p.add_argument("--expect", choices=["facet", "proper-face-lower-dim", "improper-whole-polytope", "empty-face", "invalid"])
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("lift", help="run a lift plan")
    p.add_argument("plan")
    p.add_argument("--out-dir")
    p.add_argument("--verify", action="store_true", help="re-check every emitted inequality, requiring facets")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("reproduce", help="run a canned example pipeline")
    p.add_argument("name", choices=sorted(PIPELINES))
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("noncontextual", help="membership of a correlation in the noncontextual polytope")
    p.add_argument("correlation")
    p.add_argument("--emit-certificate", metavar="PATH")
    p.set_defaults(func=cmd_noncontextual)

    # accept the global flag after the subcommand as well
    for action in sub.choices.values():
        action.add_argument("--cap-vertices", type=int, default=argparse.SUPPRESS)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        thread_count()
        report, code = args.func(args)
    except (FormatError, CapExceededError, NcliftError) as exc:
        print(f"nclift {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(dumps(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
