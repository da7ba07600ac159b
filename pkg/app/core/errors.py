class ApproximationError(Exception):
    exit_code: int = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class DomainError(ApproximationError):
    """Argument outside the operation's contract (bad z, bad config, unknown name)"""

    exit_code = 2


class PoleError(ApproximationError):
    """Rational function evaluated at one of its poles"""


class DivergenceError(ApproximationError):
    """Series or polylogarithm requested where it does not converge"""


class InsufficientPrecisionError(ApproximationError):
    """Cancellation ate more digits than the working precision provides"""


class InsufficientSequenceError(ApproximationError):
    """Sequence too short for the requested recurrence check"""


class LeadingCoefficientError(ApproximationError):
    """Recurrence cannot be solved forward: leading coefficient vanishes"""


class CancellationError(ApproximationError):
    """A polylogarithm coefficient that must vanish did not"""
