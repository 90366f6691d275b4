"""Exception and warning types shared across the package."""


class ValidityWarning(UserWarning):
    """A result was computed outside the range where its model is trusted.

    Emitted when a power-law conductivity is evaluated above its fitted
    range, or when a body is not much larger than the noise correlation
    length.
    """


class UnsupportedCaseError(ValueError):
    """The requested closed form does not cover this material or geometry."""


class ConvergenceError(RuntimeError):
    """Iterative solve stopped before reaching the requested tolerance."""

    def __init__(self, message, residual_history=None, iterations=None):
        super().__init__(message)
        self.residual_history = list(residual_history or [])
        self.iterations = iterations
