"""
Exception hierarchy for the hyperpotential toolkit.
"""
from typing import Optional


class HyperpotentialError(Exception):
    """Base class for all errors raised by the toolkit."""

    exit_code = 2

    def __init__(self, message: str, condition: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.condition = condition

    def to_dict(self):
        """Render the error as a JSON-friendly dictionary."""
        return {
            "error": type(self).__name__,
            "message": self.message,
            "condition": self.condition,
        }


class DomainError(HyperpotentialError, ValueError):
    """A request lies outside the domain where the mathematics is defined."""


class PoleError(DomainError):
    """Gamma evaluated at a nonpositive integer, or a pole value used as a number."""


class MixedPiPower(DomainError):
    """Sum of two monomials carrying different half-powers of pi."""


class DivisionByZero(DomainError, ZeroDivisionError):
    """Inversion of an exact zero."""


class DimensionMismatch(DomainError):
    """Operands live in different dimensions."""


class LogShapeError(DomainError):
    """A logarithmic atom with a degree outside its allowed parity class."""


class UnsupportedLogAtom(DomainError):
    """The operation has no rule for logarithmic atoms."""


class ExcludedParameters(DomainError):
    """Convolution requested on an excluded parameter pair."""


class UndefinedOperator(DomainError):
    """No kernel is defined for this operator family and parameter."""


class OutOfRange(DomainError):
    """Index outside the validity window of a closed form."""


class StepTooLarge(DomainError):
    """Finite-difference stencil would leave the admissible region."""


class DimensionTooSmall(DomainError):
    """The closed form requires a larger dimension."""


class ModeError(DomainError):
    """Exact arithmetic requested off the integer/half-integer grid."""


class QuadratureFailure(HyperpotentialError):
    """Adaptive quadrature did not reach the requested tolerance."""


class VerificationFailure(HyperpotentialError):
    """One or more catalog identities failed."""

    exit_code = 3
