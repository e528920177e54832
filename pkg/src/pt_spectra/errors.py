"""Exception hierarchy shared by the library and the CLI."""


class PTSpectraError(Exception):
    """Base class for all errors raised by pt_spectra."""


class InvalidDegreeError(PTSpectraError, ValueError):
    pass


class SingularInputError(PTSpectraError, ValueError):
    pass


class UnsupportedOrderError(PTSpectraError, ValueError):
    pass


class QuadratureError(PTSpectraError, RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message, error_estimate=float("nan")):
        super().__init__(message)
        self.error_estimate = error_estimate


class DomainError(PTSpectraError, ValueError):
    """Input lies outside the region where a formula is usable."""


class NoRootError(PTSpectraError, RuntimeError):
    """Newton iteration failed to converge."""

    def __init__(self, message, last=None, residual=float("nan")):
        super().__init__(message)
        self.last = last
        self.residual = residual


class DuplicateRootError(PTSpectraError, RuntimeError):
    def __init__(self, message, root=None):
        super().__init__(message)
        self.root = root


class IntegrationError(PTSpectraError, RuntimeError):
    """ODE integration broke down (step underflow or overflow)."""


class SeedAccuracyError(PTSpectraError, ValueError):
    """The asymptotic seed is not accurate enough at the requested radius."""
