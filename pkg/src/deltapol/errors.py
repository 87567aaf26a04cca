"""Exception hierarchy."""


class DeltaPolError(Exception):
    """Base class for all errors raised by deltapol."""


class InvalidModelError(DeltaPolError, ValueError):
    """Model parameters do not describe a bound delta well."""


class DomainError(DeltaPolError, ValueError):
    """A frequency or parameter lies outside an operation's domain."""


class PoleError(DeltaPolError, ZeroDivisionError):
    """Evaluation requested exactly at a pole of the resolvent."""


class QuadratureError(DeltaPolError, ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class EstimationError(DeltaPolError, ArithmeticError):
    """Richardson extrapolation of a series coefficient did not converge."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class DiscretizationError(DeltaPolError, ValueError):
    """Box discretization is too coarse to represent the bound state."""
