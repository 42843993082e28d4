"""Exception hierarchy shared by all nclift modules."""


class NcliftError(Exception):
    """Base class for every error raised deliberately by nclift."""


class ScenarioError(NcliftError, ValueError):
    """Malformed scenario, unknown measurement or duplicate label."""


class CapExceededError(NcliftError):
    """Vertex enumeration would exceed the configured cap."""


class IndexMismatchError(NcliftError, ValueError):
    """Vectors or inequalities indexed by different scenarios were combined."""


class DisturbanceError(NcliftError, ValueError):
    """A correlation violates no-disturbance where it is required."""


class InvalidInequalityError(NcliftError, ValueError):
    """The inequality is not valid on the noncontextual polytope."""


class EffectiveFormError(NcliftError):
    """The effective form could not be reconciled (internal inconsistency)."""


class LiftError(NcliftError):
    """A lifting step could not be applied.

    ``step`` is set by :func:`nclift.lifting.sequential_lift` to the index of
    the failing step.
    """

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class ExclusionError(LiftError):
    """Outcome lifting rejected: the inequality is a case-II lift with the same outcome."""
