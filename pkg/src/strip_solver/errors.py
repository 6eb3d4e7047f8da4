"""Exception types shared across the solver modules."""


class TruncationError(RuntimeError):
    """The requested series tolerance is unreachable within the mode cap."""


class AccuracyError(RuntimeError):
    """A quadrature failed to meet its tolerance; carries the last estimate."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class StepFailureError(RuntimeError):
    """A time step of the finite-difference solver failed; carries the time."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class NumericalError(RuntimeError):
    """A non-finite value appeared where a finite result is required."""
