"""JSON file formats for scenarios, correlations, inequalities and lift plans.

Rationals are written as ``"num/den"`` strings (``"3"`` when integral) and
never as floats.  Output is deterministic: canonical ordering, fixed
indentation, trailing newline.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import NcliftError
from .inequality import Inequality, OriginalForm, from_terms, to_terms
from .lifting import AddMeasurement, AddOutcome, Step
from .polytope import CorrelationVector
from .scenario import Scenario


class FormatError(NcliftError, ValueError):
    """A file does not follow the expected JSON layout."""


def format_rational(x: Fraction | int) -> str:
    return str(Fraction(x))


def parse_rational(value: Any, where: str = "value") -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise FormatError(f"{where}: rationals must be strings or integers, not {type(value).__name__}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"{where}: cannot parse {value!r} as a rational") from None
    raise FormatError(f"{where}: expected a rational string, got {type(value).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def write_json(path: str | Path, obj: Any) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def read_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _expect(cond: bool, where: str, what: str) -> None:
    if not cond:
        raise FormatError(f"{where}: {what}")


def _strings(value: Any, where: str) -> list[str]:
    _expect(isinstance(value, list), where, "expected a list")
    for i, x in enumerate(value):
        _expect(isinstance(x, (str, int)) and not isinstance(x, bool), f"{where}[{i}]", "expected a string")
    return [str(x) for x in value]


# -- scenario -------------------------------------------------------------------


def scenario_to_json(s: Scenario) -> dict:
    pos = s.position
    pairs = sorted(s.compatible, key=lambda p: (pos[p[0]], pos[p[1]]))
    return {
        "measurements": [{"name": m, "outcomes": list(s.outcomes(m))} for m in s.measurements],
        "compatible": [list(p) for p in pairs],
    }


def scenario_from_json(data: Any, where: str = "scenario") -> Scenario:
    _expect(isinstance(data, dict), where, "expected an object")
    ms = data.get("measurements")
    _expect(isinstance(ms, list), f"{where}.measurements", "expected a list")
    items = []
    for i, m in enumerate(ms):
        loc = f"{where}.measurements[{i}]"
        _expect(isinstance(m, dict) and "name" in m and "outcomes" in m, loc, "expected {name, outcomes}")
        items.append((str(m["name"]), _strings(m["outcomes"], f"{loc}.outcomes")))
    pairs = []
    for i, p in enumerate(data.get("compatible", [])):
        loc = f"{where}.compatible[{i}]"
        p = _strings(p, loc)
        _expect(len(p) == 2, loc, "expected a pair")
        pairs.append(p)
    try:
        return Scenario.build(items, pairs)
    except NcliftError as exc:
        raise FormatError(f"{where}: {exc}") from None


def resolve_scenario(ref: Any, base_dir: Path, where: str = "scenario") -> Scenario:
    """Inline scenario object or a path relative to ``base_dir``."""
    if isinstance(ref, str):
        return scenario_from_json(read_json(base_dir / ref), str(base_dir / ref))
    return scenario_from_json(ref, where)


def load_scenario(path: str | Path) -> Scenario:
    return scenario_from_json(read_json(path), str(path))


# -- correlations ---------------------------------------------------------------


def correlation_to_json(q: CorrelationVector, scenario_ref: Any = None) -> dict:
    return {
        "scenario": scenario_to_json(q.scenario) if scenario_ref is None else scenario_ref,
        "values": [
            {"context": list(ctx), "outcome": list(joint), "p": format_rational(v)}
            for (ctx, joint), v in zip(q.index.entries, q.values)
            if v
        ],
    }


def correlation_from_json(data: Any, base_dir: Path = Path("."), where: str = "correlation") -> CorrelationVector:
    _expect(isinstance(data, dict) and "scenario" in data, where, "expected an object with a scenario")
    s = resolve_scenario(data["scenario"], base_dir, f"{where}.scenario")
    values = {}
    for i, e in enumerate(data.get("values", [])):
        loc = f"{where}.values[{i}]"
        _expect(isinstance(e, dict) and {"context", "outcome", "p"} <= set(e), loc, "expected {context, outcome, p}")
        key = (tuple(_strings(e["context"], f"{loc}.context")), tuple(_strings(e["outcome"], f"{loc}.outcome")))
        _expect(key not in values, loc, "duplicate entry")
        values[key] = parse_rational(e["p"], f"{loc}.p")
    try:
        return CorrelationVector.from_map(s, values)
    except NcliftError as exc:
        raise FormatError(f"{where}: {exc}") from None


def load_correlation(path: str | Path) -> CorrelationVector:
    path = Path(path)
    return correlation_from_json(read_json(path), path.parent, str(path))


# -- inequalities ---------------------------------------------------------------


def inequality_to_json(ineq: Inequality, relation: str = "geq", bound: Fraction | int = 0, scenario_ref: Any = None) -> dict:
    return {
        "scenario": scenario_to_json(ineq.scenario) if scenario_ref is None else scenario_ref,
        "relation": relation,
        "bound": format_rational(bound),
        "terms": [
            {"context": list(ctx), "outcome": list(joint), "coeff": format_rational(c)}
            for ctx, joint, c in to_terms(ineq, relation, bound)
        ],
    }


def inequality_from_json(data: Any, base_dir: Path = Path("."), where: str = "inequality") -> Inequality:
    _expect(isinstance(data, dict) and "scenario" in data, where, "expected an object with a scenario")
    s = resolve_scenario(data["scenario"], base_dir, f"{where}.scenario")
    relation = data.get("relation", "geq")
    _expect(relation in ("leq", "geq"), f"{where}.relation", "expected 'leq' or 'geq'")
    bound = parse_rational(data.get("bound", "0"), f"{where}.bound")
    terms = []
    for i, t in enumerate(data.get("terms", [])):
        loc = f"{where}.terms[{i}]"
        _expect(isinstance(t, dict) and {"context", "outcome", "coeff"} <= set(t), loc, "expected {context, outcome, coeff}")
        terms.append(
            (
                _strings(t["context"], f"{loc}.context"),
                _strings(t["outcome"], f"{loc}.outcome"),
                parse_rational(t["coeff"], f"{loc}.coeff"),
            )
        )
    try:
        return from_terms(s, terms, relation, bound)
    except NcliftError as exc:
        raise FormatError(f"{where}: {exc}") from None


def load_inequality(path: str | Path) -> Inequality:
    path = Path(path)
    return inequality_from_json(read_json(path), path.parent, str(path))


def display_form(ineq: Inequality) -> OriginalForm | None:
    """Relation and bound of the inequality at the root of the lifting chain."""
    root = ineq.provenance[0].source if ineq.provenance else ineq
    return root.original


# -- lift plans -----------------------------------------------------------------


def step_from_json(data: Any, where: str) -> Step:
    _expect(isinstance(data, dict) and "op" in data, where, "expected an object with an 'op'")
    op = data["op"]
    if op == "add_measurement":
        _expect({"name", "outcomes"} <= set(data), where, "add_measurement needs name and outcomes")
        choice = data.get("choice")
        return AddMeasurement(
            str(data["name"]),
            tuple(_strings(data["outcomes"], f"{where}.outcomes")),
            tuple(_strings(data.get("neighbors", []), f"{where}.neighbors")),
            None if choice is None else str(choice),
        )
    if op == "add_outcome":
        _expect({"measurement", "new"} <= set(data), where, "add_outcome needs measurement and new")
        club = data.get("club_with")
        return AddOutcome(str(data["measurement"]), str(data["new"]), None if club is None else str(club))
    raise FormatError(f"{where}.op: unknown operation {op!r}")


def step_to_json(step: Step) -> dict:
    if isinstance(step, AddMeasurement):
        out = {"op": "add_measurement", "name": step.name, "outcomes": list(step.outcomes), "neighbors": list(step.neighbors)}
        if step.choice is not None:
            out["choice"] = step.choice
        return out
    out = {"op": "add_outcome", "measurement": step.measurement, "new": step.new}
    if step.club_with is not None:
        out["club_with"] = step.club_with
    return out


def plan_from_json(data: Any, base_dir: Path = Path("."), where: str = "plan") -> tuple[Inequality, list[Step]]:
    _expect(isinstance(data, dict) and "start_inequality" in data, where, "expected an object with start_inequality")
    start = data["start_inequality"]
    if isinstance(start, str):
        ineq = load_inequality(base_dir / start)
    else:
        ineq = inequality_from_json(start, base_dir, f"{where}.start_inequality")
    steps_data = data.get("steps", [])
    _expect(isinstance(steps_data, list), f"{where}.steps", "expected a list")
    return ineq, [step_from_json(s, f"{where}.steps[{i}]") for i, s in enumerate(steps_data)]


def load_plan(path: str | Path) -> tuple[Inequality, list[Step]]:
    path = Path(path)
    return plan_from_json(read_json(path), path.parent, str(path))
