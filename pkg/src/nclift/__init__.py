"""Noncontextuality polytopes and inequality lifting in exact arithmetic."""
from .errors import (
    CapExceededError,
    DisturbanceError,
    EffectiveFormError,
    ExclusionError,
    IndexMismatchError,
    InvalidInequalityError,
    LiftError,
    NcliftError,
    ScenarioError,
)
from .inequality import (
    EffectiveForm,
    FacetReport,
    Inequality,
    contributing_measurements,
    effective_form,
    equivalent,
    evaluate,
    from_terms,
    is_facet,
    is_valid,
    normalize_zero_bound,
    saturating_vertices,
    to_terms,
)
from .lifting import (
    AddMeasurement,
    AddOutcome,
    LiftedInequality,
    LiftRecord,
    lift_measurement,
    lift_measurement_case_I,
    lift_measurement_case_II,
    lift_outcome,
    sequential_lift,
    unlift_measurement,
)
from .polytope import (
    CorrelationVector,
    EventIndex,
    Vertex,
    affine_rank,
    ambient_dimension,
    check_no_disturbance,
    coarse_grain,
    enumerate_vertices,
    event_index,
    is_noncontextual,
    marginalize,
    nc_dimension,
    vertex_of,
)
from .scenario import (
    MeasurementExtension,
    OutcomeExtension,
    Scenario,
    extend_with_measurement,
    extend_with_outcome,
    find_induced_cycle,
    maximal_contexts,
    restrict,
)

__version__ = "0.1.0"

__all__ = [
    "AddMeasurement",
    "AddOutcome",
    "affine_rank",
    "ambient_dimension",
    "CapExceededError",
    "check_no_disturbance",
    "coarse_grain",
    "contributing_measurements",
    "CorrelationVector",
    "DisturbanceError",
    "effective_form",
    "EffectiveForm",
    "EffectiveFormError",
    "enumerate_vertices",
    "equivalent",
    "evaluate",
    "event_index",
    "EventIndex",
    "ExclusionError",
    "extend_with_measurement",
    "extend_with_outcome",
    "FacetReport",
    "find_induced_cycle",
    "from_terms",
    "IndexMismatchError",
    "Inequality",
    "InvalidInequalityError",
    "is_facet",
    "is_noncontextual",
    "is_valid",
    "lift_measurement",
    "lift_measurement_case_I",
    "lift_measurement_case_II",
    "lift_outcome",
    "LiftedInequality",
    "LiftError",
    "LiftRecord",
    "marginalize",
    "maximal_contexts",
    "MeasurementExtension",
    "nc_dimension",
    "NcliftError",
    "normalize_zero_bound",
    "OutcomeExtension",
    "restrict",
    "saturating_vertices",
    "Scenario",
    "ScenarioError",
    "sequential_lift",
    "to_terms",
    "unlift_measurement",
    "Vertex",
    "vertex_of",
]
