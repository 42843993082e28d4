"""Named scenarios and seed inequalities."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import ScenarioError
from .inequality import Inequality, from_terms
from .lifting import AddMeasurement, AddOutcome
from .scenario import Scenario

BITS = ("0", "1")

# Order in which the hidden 7-cycle visits the measurements of the
# anti-heptagon as it is usually drawn, so that {0,1,2,3} induces a 4-cycle
# and measurements 4, 5, 6 can be added one at a time.
ANTIHEPTAGON_CYCLE = ("0", "2", "5", "4", "3", "1", "6")

ANTIHEPTAGON_CONTEXTS = (
    ("0", "1", "4"),
    ("0", "1", "5"),
    ("0", "3", "5"),
    ("1", "2", "4"),
    ("2", "3", "6"),
    ("2", "4", "6"),
    ("3", "5", "6"),
)

# neighbourhoods used to grow the 4-cycle on {0,1,2,3} into the anti-heptagon
ANTIHEPTAGON_STEPS = (
    AddMeasurement("4", BITS, ("0", "1", "2")),
    AddMeasurement("5", BITS, ("0", "1", "3")),
    AddMeasurement("6", BITS, ("2", "3", "4", "5")),
)


def _labels(k: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(k))


def cycle_scenario(n: int, outcomes_per_measurement: int = 2) -> Scenario:
    """Measurements ``0..n-1`` with ``i`` compatible with ``i+1 mod n``."""
    if n < 3:
        raise ScenarioError(f"a cycle needs at least 3 measurements, got {n}")
    if outcomes_per_measurement < 1:
        raise ScenarioError("each measurement needs at least one outcome")
    outs = _labels(outcomes_per_measurement)
    return Scenario.build(
        [(str(i), outs) for i in range(n)],
        [(str(i), str((i + 1) % n)) for i in range(n)],
    )


def complement_cycle_scenario(n: int, cycle_order: Sequence[str] | None = None) -> Scenario:
    """Dichotomic scenario whose incompatibility graph is an ``n``-cycle.

    By default the cycle is ``0, 1, ..., n-1``; ``cycle_order`` relabels it
    (e.g. :data:`ANTIHEPTAGON_CYCLE`).
    """
    if n < 5:
        raise ScenarioError(f"the complement of a cycle needs at least 5 measurements, got {n}")
    names = [str(i) for i in range(n)]
    order = list(names if cycle_order is None else (str(m) for m in cycle_order))
    if sorted(order) != sorted(names):
        raise ScenarioError(f"cycle order must be a permutation of 0..{n - 1}")
    place = {m: i for i, m in enumerate(order)}
    pairs = [
        (a, b)
        for i, a in enumerate(names)
        for b in names[i + 1:]
        if (place[a] - place[b]) % n not in (1, n - 1)
    ]
    return Scenario.build([(m, BITS) for m in names], pairs)


def antiheptagon_scenario() -> Scenario:
    return complement_cycle_scenario(7, ANTIHEPTAGON_CYCLE)


def chsh_terms():
    return [
        (("0", "1"), ("0", "0"), 1), (("0", "1"), ("1", "1"), 1),
        (("1", "2"), ("0", "0"), 1), (("1", "2"), ("1", "1"), 1),
        (("2", "3"), ("0", "0"), 1), (("2", "3"), ("1", "1"), 1),
        (("3", "0"), ("0", "1"), 1), (("3", "0"), ("1", "0"), 1),
    ]


def chsh_inequality() -> Inequality:
    """The correlation-form CHSH inequality on the 4-cycle, bound 3."""
    return from_terms(cycle_scenario(4, 2), chsh_terms(), "leq", 3)


def chsh_zero_bound_inequality() -> Inequality:
    """CHSH written directly with lower bound zero (anti-correlation terms)."""
    terms = [
        (("0", "1"), ("0", "1"), 1), (("0", "1"), ("1", "0"), 1),
        (("1", "2"), ("0", "1"), 1), (("1", "2"), ("1", "0"), 1),
        (("2", "3"), ("0", "1"), 1), (("2", "3"), ("1", "0"), 1),
        (("3", "0"), ("0", "1"), -1), (("3", "0"), ("1", "0"), -1),
    ]
    return from_terms(cycle_scenario(4, 2), terms, "geq", 0)


def kcbs_terms(n: int = 5):
    return [((str(i), str((i + 1) % n)), ("0", "1"), 1) for i in range(n)]


def kcbs_inequality() -> Inequality:
    """``sum_i p(01 | i, i+1) <= 2`` on the dichotomic 5-cycle."""
    return from_terms(cycle_scenario(5, 2), kcbs_terms(), "leq", 2)


def square_with_apex_scenario() -> Scenario:
    """4-cycle plus measurement 4 compatible with 0, 1 and 2."""
    pairs = [("0", "1"), ("1", "2"), ("2", "3"), ("3", "0"), ("0", "4"), ("1", "4"), ("2", "4")]
    return Scenario.build([(str(i), BITS) for i in range(5)], pairs)


POST_SELECTION_STEP = AddMeasurement("5", BITS, ("0", "1", "2", "3"))


def traced_chsh_inequality() -> Inequality:
    """CHSH with measurement 4 traced out on the context ``{0,1,4}``."""
    terms = [
        (("0", "1", "4"), ("0", "1", "0"), 1), (("0", "1", "4"), ("0", "1", "1"), 1),
        (("0", "1", "4"), ("1", "0", "0"), 1), (("0", "1", "4"), ("1", "0", "1"), 1),
        (("1", "2"), ("0", "1"), 1), (("1", "2"), ("1", "0"), 1),
        (("2", "3"), ("0", "1"), 1), (("2", "3"), ("1", "0"), 1),
        (("3", "0"), ("0", "1"), -1), (("3", "0"), ("1", "0"), -1),
    ]
    return from_terms(square_with_apex_scenario(), terms, "geq", 0)


def post_selected_chsh_terms(a_k: str):
    """Terms of the case-II lift of :func:`traced_chsh_inequality` at ``5 = a_k``."""
    return [
        (("0", "1", "5"), ("1", "0", a_k), 1), (("0", "1", "5"), ("0", "1", a_k), 1),
        (("1", "2", "5"), ("1", "0", a_k), 1), (("1", "2", "5"), ("0", "1", a_k), 1),
        (("2", "3", "5"), ("1", "0", a_k), 1), (("2", "3", "5"), ("0", "1", a_k), 1),
        (("3", "0", "5"), ("0", "1", a_k), -1), (("3", "0", "5"), ("1", "0", a_k), -1),
    ]


def kcbs_outcome_steps(club_with: Sequence[str] = ("1",) * 5) -> tuple[AddOutcome, ...]:
    """Add outcome ``2`` to measurements 0..4 in turn, clubbing as given."""
    return tuple(AddOutcome(str(i), "2", c) for i, c in enumerate(club_with))


def kcbs_first_clubbed_terms():
    return kcbs_terms() + [(("4", "0"), ("0", "2"), 1)]


def kcbs_clubbed_terms():
    return kcbs_terms() + [((str(i), str((i + 1) % 5)), ("0", "2"), 1) for i in range(5)]


def trichotomic_cycle_scenario() -> Scenario:
    return cycle_scenario(5, 3)


def incompatible_pair_and_triple() -> tuple[Scenario, Scenario]:
    """Two, then three pairwise incompatible dichotomic measurements."""
    s = Scenario.build([("A", BITS), ("B", BITS)])
    t = Scenario.build([("A", BITS), ("B", BITS), ("C", BITS)])
    return s, t


def square_facet_inequality() -> Inequality:
    """``p(0|A) >= 0``, saturated by the vertices with ``A = 1``."""
    s, _ = incompatible_pair_and_triple()
    return from_terms(s, [(("A",), ("0",), 1)], "geq", 0)


def segment_facet_inequality() -> Inequality:
    """``p(1|A) >= 0`` on a single dichotomic measurement, saturated by ``v_0``."""
    s = Scenario.build([("A", BITS)])
    return from_terms(s, [(("A",), ("1",), 1)], "geq", 0)


ADD_INCOMPATIBLE_C = AddMeasurement("C", BITS, ())
ADD_COMPATIBLE_B = AddMeasurement("B", BITS, ("A",))


@dataclass(frozen=True)
class NamedFixture:
    name: str
    scenario: Scenario
    inequalities: dict[str, Inequality] = field(default_factory=dict)
    citation: str = ""

    def __post_init__(self):
        for key, ineq in self.inequalities.items():
            if ineq.scenario != self.scenario:
                raise ScenarioError(f"fixture {self.name!r}: inequality {key!r} is on another scenario")


def _fixtures() -> dict[str, Callable[[], NamedFixture]]:
    return {
        "4-cycle": lambda: NamedFixture(
            "4-cycle", cycle_scenario(4, 2),
            {"chsh": chsh_inequality(), "chsh-zero-bound": chsh_zero_bound_inequality()},
            "CHSH, correlation form with bound 3 and anti-correlation form with bound 0",
        ),
        "5-cycle": lambda: NamedFixture("5-cycle", cycle_scenario(5, 2), {"kcbs": kcbs_inequality()}, "KCBS, bound 2"),
        "5-cycle-3out": lambda: NamedFixture("5-cycle-3out", trichotomic_cycle_scenario()),
        "antiheptagon": lambda: NamedFixture("antiheptagon", antiheptagon_scenario()),
        "square-with-apex": lambda: NamedFixture("square-with-apex", square_with_apex_scenario(), {"traced-chsh": traced_chsh_inequality()}, "CHSH with 4 traced out"),
        "incompatible-pair": lambda: NamedFixture("incompatible-pair", incompatible_pair_and_triple()[0], {"p0A": square_facet_inequality()}),
        "single-measurement": lambda: NamedFixture("single-measurement", segment_facet_inequality().scenario, {"p1A": segment_facet_inequality()}),
    }


FIXTURES = _fixtures()


def fixture(name: str) -> NamedFixture:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {sorted(FIXTURES)}") from None
