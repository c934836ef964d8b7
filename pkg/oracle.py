"""
Numerical oracles for pairings of distribution expressions with test functions.

Three independent routes: closed-form Gaussian pairings valid for every
degree, finite-part radial quadrature for arbitrary radial profiles, and
finite-difference evaluation at degrees where the atoms are derivatives
of delta.
"""
import logging
import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.integrate import quad
from scipy.special import comb, gamma as Gamma, ive, psi

from coeffring import is_gamma_pole, rgamma_complex, sphere_area_float
from config import DOUBLE_INTEGRAL_CUTOFF, FD_RICHARDSON_LEVELS, FD_STEP, POLE_TOL, QUAD_EPSABS, QUAD_EPSREL, QUAD_LIMIT
from distcalc import AtomKind, DistExpr, integer_value
from errors import DomainError, QuadratureFailure

# Configure logging
logger = logging.getLogger(__name__)

SERIES_TERMS = 80


class TestFunctionKind(Enum):
    GAUSSIAN = "gaussian"
    GAUSSIAN_MOMENT = "gaussian-moment"
    POLY_GAUSSIAN = "poly-gaussian"
    CUSTOM = "custom"


@dataclass(frozen=True)
class TestFunction:
    """
    Test function phi(x) = g(|x|) or phi(x) = x_j g(|x|).

    Built-in kinds use g(r) = r^(2 power) e^(-r^2). Custom kinds supply the
    radial profile and its Taylor coefficients at 0, which bound how many
    terms the finite-part subtraction can remove.
    """
    __test__ = False

    kind: TestFunctionKind = TestFunctionKind.GAUSSIAN
    power: int = 0
    index: Optional[int] = None
    profile: Optional[Callable[[float], float]] = None
    taylor: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.power < 0:
            raise DomainError(f"Gaussian power {self.power} is negative", condition="power >= 0")
        if self.kind is TestFunctionKind.GAUSSIAN_MOMENT and self.index is None:
            raise DomainError("Gaussian moment needs a component index", condition="index j in 1..m")
        if self.index is not None and self.index < 1:
            raise DomainError(f"Component index {self.index} out of range", condition="index j >= 1")
        if self.kind is TestFunctionKind.CUSTOM and self.profile is None:
            raise DomainError("Custom test function without a profile", condition="profile callable required")

    @classmethod
    def gaussian(cls) -> "TestFunction":
        return cls(TestFunctionKind.GAUSSIAN)

    @classmethod
    def poly_gaussian(cls, power: int) -> "TestFunction":
        return cls(TestFunctionKind.POLY_GAUSSIAN, power=power)

    @classmethod
    def moment(cls, index: int, power: int = 0) -> "TestFunction":
        return cls(TestFunctionKind.GAUSSIAN_MOMENT, power=power, index=index)

    @classmethod
    def custom(cls, profile: Callable[[float], float], taylor, index: Optional[int] = None) -> "TestFunction":
        return cls(TestFunctionKind.CUSTOM, profile=profile, taylor=tuple(float(c) for c in taylor), index=index)

    @property
    def is_moment(self) -> bool:
        return self.index is not None

    @property
    def builtin(self) -> bool:
        return self.kind is not TestFunctionKind.CUSTOM

    @property
    def smoothness(self) -> Optional[int]:
        """Highest Taylor order available, None for built-in profiles."""
        return None if self.builtin else len(self.taylor) - 1

    def radial(self, r: float) -> float:
        """The radial profile g(r)."""
        if self.builtin:
            return r ** (2 * self.power) * math.exp(-r * r)
        return float(self.profile(r))

    def taylor_coefficient(self, k: int) -> float:
        """Coefficient of r^k in the expansion of g at 0."""
        if not self.builtin:
            if k >= len(self.taylor):
                raise DomainError(
                    f"Custom profile has no Taylor coefficient of order {k}",
                    condition=f"len(taylor) > {k}",
                )
            return self.taylor[k]
        shifted = k - 2 * self.power
        if shifted < 0 or shifted % 2:
            return 0.0
        i = shifted // 2
        return (-1) ** i / math.factorial(i)

    def remainder(self, r: float, order: int) -> float:
        """g(r) minus its Taylor polynomial of degree order, for 0 <= r <= 1."""
        if not self.builtin:
            return self.radial(r) - sum(self.taylor_coefficient(k) * r ** k for k in range(order + 1))
        total = 0.0
        r2 = r * r
        for i in range(SERIES_TERMS):
            k = 2 * self.power + 2 * i
            if k <= order:
                continue
            term = (-1) ** i * r ** k / math.factorial(i)
            total += term
            if abs(term) < 1e-18 * max(abs(total), 1e-300) and r2 < 1:
                break
        return total

    def describe(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "power": self.power, "index": self.index}


@dataclass
class PairingResult:
    """
    Clifford-valued pairing: a scalar part and the e_1..e_m components.
    """
    dim: int
    scalar_part: complex = 0j
    vector_part: np.ndarray = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.vector_part is None:
            self.vector_part = np.zeros(self.dim, dtype=complex)
        else:
            self.vector_part = np.asarray(self.vector_part, dtype=complex)

    def norm(self) -> float:
        return float(np.sqrt(abs(self.scalar_part) ** 2 + np.sum(np.abs(self.vector_part) ** 2)))

    def isclose(self, other: "PairingResult", rel_tol: float = 1e-8, abs_tol: float = 1e-300) -> bool:
        """Relative closeness of the whole Clifford value."""
        diff = abs(self.scalar_part - other.scalar_part) ** 2 + np.sum(np.abs(self.vector_part - other.vector_part) ** 2)
        return math.sqrt(diff) <= max(rel_tol * max(self.norm(), other.norm()), abs_tol)

    def relative_error(self, other: "PairingResult") -> float:
        diff = PairingResult(self.dim, self.scalar_part - other.scalar_part, self.vector_part - other.vector_part)
        scale = max(self.norm(), other.norm())
        return diff.norm() / scale if scale else diff.norm()


def _pochhammer(z: complex, n: int) -> complex:
    value = 1 + 0j
    for i in range(n):
        value *= z + i
    return value


def _pi_power(s: complex) -> complex:
    return complex(np.exp(s * np.log(np.pi)))


def _resolve(phi: Optional[TestFunction]) -> Tuple[Optional[TestFunction], Optional[TestFunction]]:
    """
    Test functions used for scalar atoms and for vector atoms.

    With no test function given, scalar atoms meet e^(-r^2) and vector atoms
    meet every x_j e^(-r^2), one component each.
    """
    if phi is None:
        return TestFunction.gaussian(), TestFunction(TestFunctionKind.GAUSSIAN_MOMENT, index=1)
    if phi.is_moment:
        return None, phi
    return phi, None


def _place(result: PairingResult, vector_phi: TestFunction, explicit: bool, value: complex):
    if explicit:
        if vector_phi.index > result.dim:
            raise DomainError(f"Component e_{vector_phi.index} outside dimension {result.dim}", condition="index <= m")
        result.vector_part[vector_phi.index - 1] += value
    else:
        result.vector_part += value


def pair_gaussian(e: DistExpr, phi: Optional[TestFunction] = None) -> PairingResult:
    """
    Closed-form pairing with a Gaussian-class test function.

    Valid for every degree by analytic continuation, including delta
    degrees; log atoms go through the digamma function.

    Args:
        e: expression to pair
        phi: built-in test function; default pairs scalar atoms with
            e^(-r^2) and vector atoms with each x_j e^(-r^2)

    Returns:
        PairingResult
    """
    if phi is not None and not phi.builtin:
        raise DomainError("Closed-form pairing needs a built-in test function", condition="Gaussian-class phi")
    m = e.dim
    sigma = sphere_area_float(m)
    scalar_phi, vector_phi = _resolve(phi)
    result = PairingResult(m, metadata={"method": "gaussian", "test_function": phi.describe() if phi else "gaussian"})
    for atom in e.atoms:
        coeff = atom.coeff.to_complex()
        degree = complex(atom.degree)
        if not atom.kind.is_vector:
            if scalar_phi is None:
                continue
            s = degree + m
            base = sigma / 2 * _pi_power(s / 2) * _pochhammer(s / 2, scalar_phi.power)
            if atom.kind.is_log:
                base = base / 2 * complex(psi(s / 2 + scalar_phi.power))
            result.scalar_part += coeff * base
        else:
            if vector_phi is None:
                continue
            s = degree + m + 1
            base = sigma / (2 * m) * _pi_power(s / 2) * _pochhammer(s / 2, vector_phi.power)
            if atom.kind.is_log:
                base = base / 2 * complex(psi(s / 2 + vector_phi.power))
            _place(result, vector_phi, phi is not None, coeff * base)
    return result


# Finite-part quadrature


def _checked_quad(func: Callable[[float], float], lo: float, hi: float, **kwargs) -> float:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        value, error = quad(func, lo, hi, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT, **kwargs)
    for warning in caught:
        logger.debug(f"quad on [{lo}, {hi}]: {warning.message}")
    if not np.isfinite(value) or error > 1e-6 * max(1.0, abs(value)):
        raise QuadratureFailure(
            f"Quadrature on [{lo}, {hi}] did not converge (value {value}, error {error})",
            condition=f"relative tolerance {QUAD_EPSREL}",
        )
    return value


def _complex_quad(func: Callable[[float], complex], lo: float, hi: float, is_real: bool) -> complex:
    real = _checked_quad(lambda r: func(r).real, lo, hi)
    if is_real:
        return complex(real)
    return complex(real, _checked_quad(lambda r: func(r).imag, lo, hi))


def _default_order(s: complex) -> int:
    return max(0, math.floor(-s.real) + 1)


def finite_part_integral(s: complex, phi: TestFunction, order: int, metadata: Dict[str, Any]) -> complex:
    """
    Fp integral of r^(s-1) g(r) over (0, inf).

    The Taylor polynomial of degree order is subtracted on [0, 1] and its
    moments 1/(s+k) added back; a moment sitting on a pole is dropped and
    recorded in metadata.
    """
    if s.real + order <= 0:
        raise DomainError(
            f"Subtraction order {order} too low for exponent {s - 1}",
            condition="Re(degree) + m - 1 > -subtraction_order - 1",
        )
    is_real = s.imag == 0
    exponent = s - 1

    def near(r):
        return r ** exponent * phi.remainder(r, order) if r > 0 else 0j

    def far(r):
        return r ** exponent * phi.radial(r)

    value = _complex_quad(near, 0.0, 1.0, is_real) + _complex_quad(far, 1.0, np.inf, is_real)
    for k in range(order + 1):
        c_k = phi.taylor_coefficient(k)
        if c_k == 0:
            continue
        if abs(s + k) <= POLE_TOL:
            logger.warning(f"Dropping finite-part moment r^{k} at pole s = {s}")
            metadata.setdefault("dropped_moments", []).append(k)
            continue
        value += c_k / (s + k)
    return value


def _log_integral(s: complex, phi: TestFunction) -> complex:
    is_real = s.imag == 0

    def integrand(r):
        return r ** (s - 1) * math.log(r) * phi.radial(r) if r > 0 else 0j

    return _complex_quad(integrand, 0.0, 1.0, is_real) + _complex_quad(integrand, 1.0, np.inf, is_real)


def _normalized_pairing(s: complex, phi: TestFunction, order: Optional[int], log: bool, metadata: Dict[str, Any]) -> complex:
    """pi^(s/2)/Gamma(s/2) times the Fp integral of r^(s-1) g, continued through Gamma poles."""
    if log:
        return _pi_power(s / 2) * rgamma_complex(s / 2).to_complex() * _log_integral(s, phi)
    if is_gamma_pole(s / 2):
        l = -round((s / 2).real)
        metadata.setdefault("residue_degrees", []).append(-2 * l)
        return np.pi ** (-l) * (-1) ** l * math.factorial(l) * phi.taylor_coefficient(2 * l) / 2
    order = _default_order(s) if order is None else order
    metadata.setdefault("subtraction_orders", []).append(order)
    return _pi_power(s / 2) * rgamma_complex(s / 2).to_complex() * finite_part_integral(s, phi, order, metadata)


def pair_quadrature(e: DistExpr, phi: Optional[TestFunction] = None, subtraction_order: Optional[int] = None) -> PairingResult:
    """
    Pair by finite-part radial quadrature.

    Args:
        e: expression to pair
        phi: test function; Gaussian defaults as in pair_gaussian
        subtraction_order: Taylor degree removed near 0, chosen per atom
            when omitted

    Returns:
        PairingResult with metadata on residues and dropped moments

    Raises:
        QuadratureFailure: an integral missed its tolerance
        DomainError: subtraction order too low or profile not smooth enough
    """
    m = e.dim
    sigma = sphere_area_float(m)
    scalar_phi, vector_phi = _resolve(phi)
    result = PairingResult(m, metadata={"method": "quadrature", "test_function": phi.describe() if phi else "gaussian"})
    for atom in e.atoms:
        coeff = atom.coeff.to_complex()
        degree = complex(atom.degree)
        if not atom.kind.is_vector:
            if scalar_phi is None:
                continue
            value = _normalized_pairing(degree + m, scalar_phi, subtraction_order, atom.kind.is_log, result.metadata)
            result.scalar_part += coeff * sigma * value
        else:
            if vector_phi is None:
                continue
            value = _normalized_pairing(degree + m + 1, vector_phi, subtraction_order, atom.kind.is_log, result.metadata)
            _place(result, vector_phi, phi is not None, coeff * sigma / m * value)
    logger.debug(f"Quadrature pairing of {len(e.atoms)} atoms: {result.metadata}")
    return result


# Delta-derivative evaluation


def _even_derivative(profile: Callable[[float], float], order: int, step: float) -> float:
    """order-th derivative at 0 of t -> profile(|t|), central differences."""
    if order == 0:
        return profile(0.0)
    total = 0.0
    for k in range(order + 1):
        total += (-1) ** k * comb(order, k, exact=True) * profile(abs((order / 2 - k) * step))
    return total / step ** order


def _richardson(values: List[float], levels: int) -> float:
    table = list(values)
    for level in range(1, levels + 1):
        factor = 4 ** level
        table = [(factor * table[i + 1] - table[i]) / (factor - 1) for i in range(len(table) - 1)]
    return table[0]


def taylor_by_differences(phi: TestFunction, order: int, step: Optional[float] = None) -> float:
    """Taylor coefficient g_order of the radial profile from finite differences."""
    step = FD_STEP if step is None else step
    levels = FD_RICHARDSON_LEVELS
    samples = [_even_derivative(phi.radial, order, step / 2 ** i) for i in range(levels + 1)]
    return _richardson(samples, levels) / math.factorial(order)


def delta_derivative(m: int, degree: int, phi: Optional[TestFunction] = None, step: Optional[float] = None) -> PairingResult:
    """
    Pair a unit atom on the delta grid by differentiating the test function.

    T*_{-m-2l} acts as a multiple of (-laplace)^l at 0; U*_{-m-2l-1} as a
    multiple of dirac^(2l+1) at 0. Instead of differencing (-laplace)^l phi
    directly, the Taylor coefficient g_2l of the radial profile is taken by
    central differences and multiplied by laplace^l r^(2l), which gives the
    same value at 0.

    Args:
        m: dimension
        degree: -m-2l for a scalar atom, -m-2l-1 for a vector atom
        phi: test function, Gaussian defaults as in pair_gaussian
        step: finite-difference base step

    Returns:
        PairingResult of the unit atom
    """
    shift = integer_value(-degree - m)
    if shift is None or shift < 0:
        raise DomainError(f"Degree {degree} is not on the delta grid of m = {m}", condition="degree = -m - n, n >= 0")
    scalar_phi, vector_phi = _resolve(phi)
    result = PairingResult(m, metadata={"method": "finite-difference", "step": FD_STEP if step is None else step})
    l = shift // 2
    weight = np.pi ** (m / 2 - l) * (-1) ** l * math.factorial(l)
    if shift % 2 == 0:
        if scalar_phi is not None:
            result.scalar_part = weight * taylor_by_differences(scalar_phi, 2 * l, step) / Gamma(m / 2)
    elif vector_phi is not None:
        value = weight * taylor_by_differences(vector_phi, 2 * l, step) / (2 * Gamma(m / 2 + 1))
        _place(result, vector_phi, phi is not None, value)
    return result


# Brute-force convolution


def _sphere_average_kernel(m: int, z: float) -> float:
    """Integral over the sphere of e^(z cos) divided by e^z."""
    if z < 1e-12:
        return sphere_area_float(m) * math.exp(-z)
    nu = m / 2 - 1
    return (2 * np.pi) ** (m / 2) * z ** (-nu) * float(ive(nu, z))


def _heat_tail(alpha: float, beta: float, m: int, cutoff: float, terms: int = 6) -> float:
    """Integral over [cutoff, inf) of s^(alpha+m-1) times the large-s expansion of r^beta * e^(-r^2)."""
    total = 0.0
    laplace_factor = 1.0
    for k in range(terms):
        power = alpha + beta + m - 2 * k
        total += laplace_factor / (4 ** k * math.factorial(k)) * cutoff ** power / -power
        laplace_factor *= (beta - 2 * k) * (beta - 2 * k + m - 2)
    return np.pi ** (m / 2) * total


def convolution_double_integral(alpha: float, beta: float, m: int) -> PairingResult:
    """
    Pair T*_alpha * T*_beta with e^(-r^2) by direct iterated radial quadrature.

    Uses the exact spherical average of e^(2 s rho cos) through the scaled
    modified Bessel function, so only two radial integrals remain. Beyond
    a cutoff the outer integrand is replaced by the large-s expansion of
    r^beta * e^(-r^2), the series pi^(m/2) sum_k (laplace/4)^k r^beta / k!,
    integrated term by term.

    Args:
        alpha: first degree, > -m
        beta: second degree, > -m
        m: dimension

    Returns:
        PairingResult with the scalar value

    Raises:
        DomainError: the iterated integral diverges at these degrees
    """
    if alpha <= -m or beta <= -m or alpha + beta + m >= 0:
        raise DomainError(
            f"Double integral diverges at alpha = {alpha}, beta = {beta}, m = {m}",
            condition="alpha, beta > -m and alpha + beta + m < 0",
        )
    c_alpha = np.pi ** ((alpha + m) / 2) / Gamma((alpha + m) / 2)
    c_beta = np.pi ** ((beta + m) / 2) / Gamma((beta + m) / 2)
    sigma = sphere_area_float(m)
    width = 8.0

    def inner(s: float) -> float:
        if s <= 0:
            return 0.0

        def integrand(rho):
            if rho <= 0:
                return 0.0
            return rho ** (beta + m - 1) * math.exp(-(s - rho) ** 2) * _sphere_average_kernel(m, 2 * s * rho)

        lo, hi = max(0.0, s - width), s + width
        points = [s] if lo < s < hi else None
        value = _checked_quad(integrand, lo, hi, points=points)
        return s ** (alpha + m - 1) * value

    cutoff = DOUBLE_INTEGRAL_CUTOFF
    total = _checked_quad(inner, 0.0, 1.0) + _checked_quad(inner, 1.0, cutoff) + _heat_tail(alpha, beta, m, cutoff)
    value = c_alpha * c_beta * sigma * total
    logger.info(f"Double-integral pairing at alpha={alpha}, beta={beta}, m={m}: {value}")
    return PairingResult(m, complex(value), metadata={"method": "double-integral", "alpha": alpha, "beta": beta})
