"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class PreconditionError(ValueError):
    """A physical validity guard was violated."""


class NumericalError(RuntimeError):
    """A numerical procedure failed to converge or to bracket a root.

    ``diagnostics`` carries whatever the failing routine knew at the time.
    """

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class QuadratureError(NumericalError):
    """Panel budget exhausted before the requested tolerance was reached."""

    def __init__(self, message, error_estimate, n_panels, **diagnostics):
        super().__init__(message, error_estimate=error_estimate,
                         n_panels=n_panels, **diagnostics)
        self.error_estimate = error_estimate
        self.n_panels = n_panels
