class RotwaveError(Exception):
    """Base class for errors raised by this package."""


class DomainError(RotwaveError, ValueError):
    """Argument outside the domain of a function."""


class ParameterError(RotwaveError, ValueError):
    """Parameter outside the admissible range (e.g. lambda <= -2*Gamma_0)."""


class NumericError(RotwaveError, ArithmeticError):
    """Non-finite intermediate value or failed quadrature."""


class NoBifurcationError(RotwaveError):
    """No sign change of the shooting mismatch was bracketed."""


class SingularMatrixError(RotwaveError, ArithmeticError):
    """Linear system is numerically singular."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class StagnationError(RotwaveError):
    """Discrete h_p <= 0 somewhere: the flow would contain a stagnation point."""
