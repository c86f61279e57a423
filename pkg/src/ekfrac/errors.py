"""Exception types raised by :mod:`ekfrac`."""


class EKError(Exception):
    """Base class for all library errors."""


class ParameterError(EKError, ValueError):
    """Arguments outside the admissible domain of an operation."""


class PoleError(ParameterError):
    """Evaluation at a pole (e.g. the gamma function at a non-positive integer)."""


class NumericalError(EKError, ArithmeticError):
    """A computation failed to produce a trustworthy number."""


class ConvergenceError(NumericalError):
    """An iterative procedure hit its iteration cap before reaching tolerance."""


class PrecisionLossError(NumericalError):
    """Cancellation destroyed more digits than the caller allows."""


class SingularSystemError(NumericalError):
    """A linear system expected to be symmetric positive definite is not."""
