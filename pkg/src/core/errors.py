class MaRelayError(Exception):
    """Base class for domain errors raised by the toolkit."""


class DegenerateChannelError(MaRelayError, ValueError):
    """A zero channel vector was passed where a link is required."""


class InfeasiblePlacementError(MaRelayError, ValueError):
    """Placement violates the region or spacing constraints, or none exists."""


class DimensionMismatchError(MaRelayError, ValueError):
    """Vector/matrix shapes do not agree."""


class IllConditionedError(MaRelayError, ValueError):
    """Linear system too ill-conditioned to solve reliably."""


class InvariantViolation(MaRelayError, AssertionError):
    """A dominance, monotonicity or feasibility property failed in verification mode."""
