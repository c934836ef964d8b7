"""
Scalar arithmetic for kernel coefficients.

Exact scalars are single monomials q * pi^(h/2) with q rational, which is
enough for every closed-form coefficient once the dimension and the
parameter are on the integer/half-integer grid. Numeric scalars are complex
doubles that carry a pole flag in place of a value.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

import numpy as np
from scipy.special import gamma as Gamma
from scipy.special import loggamma

from config import POLE_TOL
from errors import DivisionByZero, DomainError, MixedPiPower, PoleError

# Configure logging
logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class ExactScalar:
    """
    Exact coefficient value * pi^(pi_half / 2).

    The rational part is a Fraction, so numerator and denominator are
    arbitrary-precision and always reduced. Zero is stored with pi_half = 0.
    """
    value: Fraction = Fraction(0)
    pi_half: int = 0

    def __post_init__(self):
        if isinstance(self.value, float):
            raise TypeError("ExactScalar needs an int or Fraction, not a float")
        value = Fraction(self.value)
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "pi_half", 0 if value == 0 else int(self.pi_half))

    @classmethod
    def from_parts(cls, num: int, den: int = 1, pi_half: int = 0) -> "ExactScalar":
        """Build from the (num, den, pi_half) triple."""
        if den == 0:
            raise DivisionByZero("Zero denominator", condition="den >= 1")
        return cls(Fraction(num, den), pi_half)

    @property
    def num(self) -> int:
        return self.value.numerator

    @property
    def den(self) -> int:
        return self.value.denominator

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    def __bool__(self):
        return not self.is_zero

    def __add__(self, other):
        other = _as_exact(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        if self.pi_half != other.pi_half:
            raise MixedPiPower(
                f"Cannot add {self} and {other}",
                condition="equal pi_half required for addition",
            )
        return ExactScalar(self.value + other.value, self.pi_half)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar(-self.value, self.pi_half)

    def __sub__(self, other):
        other = _as_exact(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_exact(other)
        if other is NotImplemented:
            return NotImplemented
        return ExactScalar(self.value * other.value, self.pi_half + other.pi_half)

    __rmul__ = __mul__

    def invert(self) -> "ExactScalar":
        """Multiplicative inverse."""
        if self.is_zero:
            raise DivisionByZero("Cannot invert exact zero", condition="nonzero divisor")
        return ExactScalar(1 / self.value, -self.pi_half)

    def __truediv__(self, other):
        other = _as_exact(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other):
        return _as_exact(other) * self.invert()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.invert() ** (-exponent)
        return ExactScalar(self.value ** exponent, self.pi_half * exponent)

    def to_complex(self) -> complex:
        if self.is_zero:
            return 0j
        return complex(float(self.value) * math.pi ** (self.pi_half / 2))

    def to_numeric(self) -> "NumericScalar":
        return NumericScalar.from_complex(self.to_complex())

    def __str__(self):
        if self.is_zero:
            return "0"
        rational = str(self.value)
        if self.pi_half == 0:
            return rational
        power = Fraction(self.pi_half, 2)
        return f"{rational}*pi^({power})"


def _as_exact(other):
    if isinstance(other, ExactScalar):
        return other
    if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
        return ExactScalar(Fraction(other), 0)
    return NotImplemented


@dataclass(frozen=True)
class NumericScalar:
    """
    Complex double with a pole flag.

    A flagged value has no meaningful (re, im); it survives arithmetic as a
    pole and refuses conversion to a plain number.
    """
    re: float = 0.0
    im: float = 0.0
    is_pole: bool = False

    @classmethod
    def from_complex(cls, z: complex) -> "NumericScalar":
        z = complex(z)
        return cls(float(z.real), float(z.imag), False)

    @classmethod
    def pole(cls) -> "NumericScalar":
        return cls(float("nan"), float("nan"), True)

    @property
    def is_zero(self) -> bool:
        return not self.is_pole and self.re == 0.0 and self.im == 0.0

    def __bool__(self):
        return not self.is_zero

    def to_complex(self) -> complex:
        if self.is_pole:
            raise PoleError("Numeric value is a Gamma pole", condition="finite value required")
        return complex(self.re, self.im)

    def to_numeric(self) -> "NumericScalar":
        return self

    def _combine(self, other, op):
        other = _as_numeric(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_pole or other.is_pole:
            return NumericScalar.pole()
        return NumericScalar.from_complex(op(complex(self.re, self.im), complex(other.re, other.im)))

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._combine(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._combine(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self):
        if self.is_pole:
            return self
        return NumericScalar(-self.re, -self.im)

    def invert(self) -> "NumericScalar":
        if self.is_pole:
            return NumericScalar(0.0, 0.0)
        if self.is_zero:
            raise DivisionByZero("Cannot invert numeric zero", condition="nonzero divisor")
        return NumericScalar.from_complex(1 / complex(self.re, self.im))

    def __truediv__(self, other):
        other = _as_numeric(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.invert()

    def isclose(self, other: "NumericScalar", tol: float) -> bool:
        """Relative-or-absolute closeness; poles never compare."""
        a, b = self.to_complex(), _as_numeric(other).to_complex()
        return abs(a - b) <= tol * max(1.0, abs(a), abs(b))

    def __str__(self):
        if self.is_pole:
            return "pole"
        if self.im == 0.0:
            return repr(self.re)
        sign = "-" if self.im < 0 else "+"
        return f"({self.re!r}{sign}{abs(self.im)!r}j)"


def _as_numeric(other):
    if isinstance(other, NumericScalar):
        return other
    if isinstance(other, ExactScalar):
        return other.to_numeric()
    if isinstance(other, (int, float, complex, Fraction, np.number)) and not isinstance(other, bool):
        return NumericScalar.from_complex(complex(other))
    return NotImplemented


Scalar = Union[ExactScalar, NumericScalar]


def make_scalar(value, mode: str, pi_half: int = 0) -> Scalar:
    """
    Build value * pi^(pi_half/2) in the requested arithmetic mode.

    Args:
        value: int or Fraction in exact mode; any number in numeric mode
        mode: "exact" or "numeric"
        pi_half: half-power of pi

    Returns:
        ExactScalar or NumericScalar
    """
    if mode == "exact":
        return ExactScalar(Fraction(value), pi_half)
    return NumericScalar.from_complex(complex(value) * math.pi ** (pi_half / 2))


def pi_power(pi_half: int) -> ExactScalar:
    """pi^(pi_half/2) as an exact scalar."""
    return ExactScalar(Fraction(1), pi_half)


@lru_cache(maxsize=None)
def gamma_half(n: int) -> ExactScalar:
    """
    Gamma(n/2) for integer n, exactly.

    Args:
        n: twice the Gamma argument

    Returns:
        A rational for even n > 0, a rational times sqrt(pi) for odd n

    Raises:
        PoleError: n is even and nonpositive
    """
    if n % 2 == 0:
        if n <= 0:
            raise PoleError(f"Gamma({n}/2) is a pole", condition=f"n = {n} is even and nonpositive")
        return ExactScalar(math.factorial(n // 2 - 1))
    value = Fraction(1)
    if n > 0:
        for j in range(1, n, 2):
            value *= Fraction(j, 2)
    else:
        for j in range(n, 0, 2):
            value /= Fraction(j, 2)
    return ExactScalar(value, 1)


def gamma_half_has_pole(n: int) -> bool:
    """True when Gamma(n/2) sits on a pole."""
    return n <= 0 and n % 2 == 0


def sphere_area(d: int) -> ExactScalar:
    """
    Area of the unit sphere in R^d, 2 pi^(d/2) / Gamma(d/2).

    Args:
        d: ambient dimension, at least 1

    Returns:
        Exact sphere area
    """
    if d < 1:
        raise DomainError(f"Sphere area needs d >= 1, got {d}", condition="d >= 1")
    return ExactScalar(2, d) / gamma_half(d)


def is_gamma_pole(z: complex) -> bool:
    """True when z is within POLE_TOL of a nonpositive integer."""
    z = complex(z)
    n = round(z.real)
    return n <= 0 and abs(z - n) <= POLE_TOL


def gamma_complex(z: complex) -> NumericScalar:
    """
    Gamma(z) for complex z with pole detection.

    Real arguments use scipy's gamma directly; complex arguments go through
    loggamma, reflected for Re z < 1/2.

    Args:
        z: argument

    Returns:
        NumericScalar, flagged as a pole near nonpositive integers
    """
    z = complex(z)
    if is_gamma_pole(z):
        logger.debug(f"Gamma pole at z = {z}")
        return NumericScalar.pole()
    if z.imag == 0.0:
        return NumericScalar.from_complex(complex(Gamma(z.real)))
    if z.real < 0.5:
        value = np.pi / (np.sin(np.pi * z) * np.exp(loggamma(1 - z)))
    else:
        value = np.exp(loggamma(z))
    return NumericScalar.from_complex(complex(value))


def rgamma_complex(z: complex) -> NumericScalar:
    """1/Gamma(z), exactly zero at the poles of Gamma."""
    value = gamma_complex(z)
    if value.is_pole:
        return NumericScalar(0.0, 0.0)
    return value.invert()


def sphere_area_float(d: int) -> float:
    """Floating sphere area."""
    return sphere_area(d).to_complex().real
