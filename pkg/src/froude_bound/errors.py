"""Exception hierarchy shared by every module of the package."""


class FroudeBoundError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(FroudeBoundError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class BracketError(FroudeBoundError):
    """The search interval does not contain a sign change."""


class AmbiguityError(FroudeBoundError):
    """The search interval contains more than one sign change."""


class AccuracyError(FroudeBoundError):
    """Adaptive quadrature exhausted its recursion depth.

    The best available estimate is kept on ``estimate``.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class EvaluationError(FroudeBoundError):
    """A sampled function value was not finite."""


class CertificationError(FroudeBoundError):
    """A sign or inequality certificate failed; ``step`` names the failing check."""

    def __init__(self, message, step=None, point=None):
        super().__init__(message)
        self.step = step
        self.point = point


class ConsistencyError(FroudeBoundError):
    """Two independent evaluations of the same quantity disagree."""
