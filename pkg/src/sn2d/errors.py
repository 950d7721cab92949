"""Exception hierarchy. Every error carries a short machine-readable code."""


class Sn2dError(Exception):
    code = "SN2D_ERROR"


class NoEventError(Sn2dError):
    """Integration reached r_max without a terminal classification."""

    code = "NO_EVENT"


class StepUnderflowError(Sn2dError):
    code = "STEP_UNDERFLOW"


class BracketFailedError(Sn2dError):
    code = "BRACKET_FAILED"


class EmptyProfileError(Sn2dError):
    code = "EMPTY_PROFILE"


class CentrifugalDivergenceError(Sn2dError):
    """u/r is unbounded at the origin, so the m^2/r^2 term is not integrable."""

    code = "CENTRIFUGAL_DIVERGENCE"


class InsufficientRangeError(Sn2dError):
    code = "INSUFFICIENT_RANGE"


class BadParamsError(Sn2dError, ValueError):
    code = "BAD_PARAMS"


class ConsistencyError(Sn2dError):
    """Two routes to the same quantity disagree beyond tolerance."""

    code = "INCONSISTENT"
