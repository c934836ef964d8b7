"""
Conjugate harmonic potentials in the upper half-space.

Pointwise closed forms for A_k, B_k and C_k = A_k/2 + conj(e_0) B_k/2,
finite-difference checks of monogenicity and of the conj(D) chain, and
numerical boundary limits compared against the symbolic boundary values.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import quad
from scipy.special import beta as Beta, betainc, gamma as Gamma

from analytics import VerificationAnalytics
from cliffordnum import Multivector, e0_bar
from coeffring import sphere_area_float
from config import POTENTIAL_STEP, PROFILE_EPSREL, QUAD_EPSABS, QUAD_EPSREL, QUAD_LIMIT
from errors import DimensionTooSmall, DomainError, OutOfRange, QuadratureFailure, StepTooLarge
from kernels import BoundaryValueId, boundary_value
from oracle import TestFunction, pair_gaussian

# Configure logging
logger = logging.getLogger(__name__)

SMALL_V = 1e-4


@dataclass(frozen=True)
class HalfSpacePoint:
    """Point x = x0 e_0 + x_vec with x0 > 0."""
    x0: float
    x_vec: Tuple[float, ...]

    def __post_init__(self):
        if not self.x0 > 0:
            raise DomainError(f"Point with x0 = {self.x0} is not in the upper half-space", condition="x0 > 0")
        object.__setattr__(self, "x_vec", tuple(float(c) for c in self.x_vec))

    @property
    def m(self) -> int:
        return len(self.x_vec)

    @property
    def rho(self) -> float:
        return math.sqrt(sum(c * c for c in self.x_vec))

    @property
    def norm(self) -> float:
        return math.hypot(self.x0, self.rho)

    def shifted(self, axis: int, h: float) -> "HalfSpacePoint":
        """Move by h along e_axis, axis 0 being the normal direction."""
        if axis == 0:
            return HalfSpacePoint(self.x0 + h, self.x_vec)
        coords = list(self.x_vec)
        coords[axis - 1] += h
        return HalfSpacePoint(self.x0, tuple(coords))


class PotentialFamily(Enum):
    A = "A"
    B = "B"
    C = "C"


@dataclass(frozen=True)
class PotentialId:
    family: PotentialFamily
    k: int

    MIN_INDEX = -3
    MAX_INDEX = 2

    def __post_init__(self):
        if not self.MIN_INDEX <= self.k <= self.MAX_INDEX:
            raise OutOfRange(
                f"No closed form for {self.family.value}_{self.k}",
                condition=f"{self.MIN_INDEX} <= k <= {self.MAX_INDEX}",
            )

    def __str__(self):
        return f"{self.family.value}_{self.k}"


def F_m_profile(m: int, v: float, method: str = "quad") -> float:
    """
    F_m(v), the integral of eta^(m-1) / (1 + eta^2)^((m+1)/2) over [0, v].

    Args:
        m: profile index, at least 1
        v: upper limit, v >= 0; math.inf gives the closed-form total
        method: "quad" for adaptive quadrature, "beta" for the regularized
            incomplete beta function

    Returns:
        F_m(v)
    """
    if m < 1:
        raise DimensionTooSmall(f"F_{m} is not defined", condition="m >= 1")
    if v < 0:
        raise DomainError(f"F_m needs v >= 0, got {v}", condition="v >= 0")
    if math.isinf(v):
        return math.sqrt(math.pi) / 2 * Gamma(m / 2) / Gamma((m + 1) / 2)
    if v == 0:
        return 0.0
    if method == "beta":
        half_beta = Beta(m / 2, 0.5) / 2
        x = v * v / (1 + v * v)
        if x <= 0.5:
            return half_beta * betainc(m / 2, 0.5, x)
        return half_beta * (1 - betainc(0.5, m / 2, 1 / (1 + v * v)))
    value, error = quad(
        lambda eta: eta ** (m - 1) / (1 + eta * eta) ** ((m + 1) / 2),
        0.0, v, epsabs=0.0, epsrel=PROFILE_EPSREL, limit=QUAD_LIMIT,
    )
    return value


def _scaled_profile(n: int, rho: float, x0: float) -> float:
    """rho^(-n) F_n(rho/x0), continued smoothly to rho = 0."""
    v = rho / x0
    if v < SMALL_V:
        return x0 ** (-n) * (1 / n - (n + 1) * v * v / (2 * (n + 2)))
    return rho ** (-n) * F_m_profile(n, v, method="beta")


def _require_dim(m: int, minimum: int, label: str):
    if m < minimum:
        raise DimensionTooSmall(f"{label} needs m >= {minimum}, got m = {m}", condition=f"m >= {minimum}")


def scalar_potential(k: int, m: int, x0: float, rho: float) -> float:
    """A_k at a point with |x_vec| = rho."""
    sigma = sphere_area_float(m + 1)
    kk = 2 / sigma
    r2 = x0 * x0 + rho * rho
    r = math.sqrt(r2)
    if k == -3:
        return kk * (m + 1) * x0 * r ** (-m - 5) * (-3 * r2 + (m + 3) * x0 * x0)
    if k == -2:
        return kk * (r ** (-m - 1) - (m + 1) * x0 * x0 * r ** (-m - 3))
    if k == -1:
        return kk * x0 / r ** (m + 1)
    if k == 0:
        _require_dim(m, 2, "A_0")
        return -kk / (m - 1) * r ** (1 - m)
    big_k = 2 / ((m - 1) * sigma)
    if k == 1:
        _require_dim(m, 3, "A_1")
        return big_k * _scaled_profile(m - 2, rho, x0)
    _require_dim(m, 4, "A_2")
    return big_k * x0 * _scaled_profile(m - 2, rho, x0) - big_k / (m - 3) * r ** (3 - m)


def vector_potential_factor(k: int, m: int, x0: float, rho: float) -> float:
    """The scalar beta with B_k = beta * x_vec."""
    sigma = sphere_area_float(m + 1)
    kk = 2 / sigma
    r2 = x0 * x0 + rho * rho
    r = math.sqrt(r2)
    if k == -3:
        return kk * (m + 1) * (r ** (-m - 3) - (m + 3) * x0 * x0 * r ** (-m - 5))
    if k == -2:
        return kk * (m + 1) * x0 * r ** (-m - 3)
    if k == -1:
        return -kk / r ** (m + 1)
    if k == 0:
        return kk * _scaled_profile(m, rho, x0)
    if k == 1:
        _require_dim(m, 2, "B_1")
        return kk * x0 * _scaled_profile(m, rho, x0) - kk / (m - 1) * r ** (1 - m)
    _require_dim(m, 3, "B_2")
    return r2 / sigma * _scaled_profile(m, rho, x0) - (m - 3) / (m - 1) / sigma * _scaled_profile(m - 2, rho, x0)


def evaluate(pid: PotentialId, p: HalfSpacePoint) -> Multivector:
    """
    Evaluate A_k, B_k or C_k at a point.

    Args:
        pid: potential family and index
        p: point in the upper half-space

    Returns:
        Multivector in R_{0,m+1}: scalar for A, vector for B, scalar plus
        e_0 e_j bivectors for C
    """
    m = p.m
    if m < 2:
        raise DimensionTooSmall(f"Potentials need m >= 2, got {m}", condition="m >= 2")
    dim = m + 1
    if pid.family is PotentialFamily.A:
        return Multivector.scalar(dim, scalar_potential(pid.k, m, p.x0, p.rho))
    b_vec = Multivector.vector(dim, p.x_vec, start=1) * vector_potential_factor(pid.k, m, p.x0, p.rho)
    if pid.family is PotentialFamily.B:
        return b_vec
    a_part = Multivector.scalar(dim, scalar_potential(pid.k, m, p.x0, p.rho))
    return 0.5 * a_part + e0_bar(dim) * (0.5 * b_vec)


# Finite-difference checks


def _check_step(p: HalfSpacePoint, h: float):
    if h <= 0:
        raise DomainError(f"Step {h} must be positive", condition="h > 0")
    if p.x0 <= 3 * h or p.norm <= 3 * h:
        raise StepTooLarge(
            f"Step {h} too large at x0 = {p.x0}, |x| = {p.norm}",
            condition="x0 > 3h and |x| > 3h",
        )


def _partial(pid: PotentialId, p: HalfSpacePoint, axis: int, h: float, extrapolate: bool) -> Multivector:
    def central(step):
        return (evaluate(pid, p.shifted(axis, step)) - evaluate(pid, p.shifted(axis, -step))) / (2 * step)

    coarse = central(h)
    if not extrapolate:
        return coarse
    return (4 * central(h / 2) - coarse) / 3


def _cauchy_riemann(pid: PotentialId, p: HalfSpacePoint, h: float, sign: int, extrapolate: bool) -> Multivector:
    """(d_0 + sign conj(e_0) dirac) C / 2 by central differences."""
    dim = p.m + 1
    d0 = _partial(pid, p, 0, h, extrapolate)
    grad = Multivector(dim)
    for j in range(1, dim):
        grad = grad + Multivector.basis(dim, j) * _partial(pid, p, j, h, extrapolate)
    return 0.5 * (d0 + sign * (e0_bar(dim) * grad))


def _require_cauchy(pid: PotentialId):
    if pid.family is not PotentialFamily.C:
        raise DomainError(f"{pid} is not a monogenic potential", condition="family C")


def monogenicity_residual(pid: PotentialId, p: HalfSpacePoint, h: float = POTENTIAL_STEP, extrapolate: bool = True) -> float:
    """
    Norm of D C_k at p, D = (d_0 + conj(e_0) dirac)/2.

    Args:
        pid: a C-family potential
        p: interior point
        h: difference step
        extrapolate: one Richardson level on top of central differences

    Returns:
        Residual magnitude, pure discretization error for a monogenic C_k
    """
    _require_cauchy(pid)
    _check_step(p, h)
    residual = _cauchy_riemann(pid, p, h, +1, extrapolate).norm()
    logger.debug(f"D {pid} at {p}: residual {residual:.3e} (h = {h})")
    return residual


def conjugate_residual(k: int, p: HalfSpacePoint, h: float = POTENTIAL_STEP, extrapolate: bool = True) -> float:
    """Norm of conj(D) C_k - C_{k-1} at p."""
    pid = PotentialId(PotentialFamily.C, k)
    previous = PotentialId(PotentialFamily.C, k - 1)
    _check_step(p, h)
    lowered = _cauchy_riemann(pid, p, h, -1, extrapolate)
    return (lowered - evaluate(previous, p)).norm()


# Integrals over the boundary hyperplane


def _radial_integral(func, x0: float) -> float:
    cut = 50 * x0
    edges = [0.0, cut, np.inf] if cut >= 1 else [0.0, cut, 1.0, np.inf]
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        value, error = quad(func, lo, hi, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT)
        if not np.isfinite(value) or error > 1e-6 * max(1.0, abs(value)):
            raise QuadratureFailure(
                f"Radial integral on [{lo}, {hi}] did not converge (error {error})",
                condition=f"relative tolerance {QUAD_EPSREL}",
            )
        total += value
    return total


def poisson_mass(m: int, x0: float) -> float:
    """Integral of A_{-1}(x0, .) over R^m; equals 1."""
    sigma_m = sphere_area_float(m)
    return sigma_m * _radial_integral(lambda rho: rho ** (m - 1) * scalar_potential(-1, m, x0, rho), x0)


def boundary_pairing(pid: PotentialId, m: int, x0: float, phi: Optional[TestFunction] = None) -> float:
    """
    Pair A_k(x0, .) with a radial phi, or B_k(x0, .) with x_j g(|x|).

    Args:
        pid: A or B potential
        m: dimension of the boundary hyperplane
        x0: height above the boundary
        phi: built-in test function; e^(-r^2) for A and x_1 e^(-r^2) for B
            by default

    Returns:
        The scalar part for A, the e_j component for B
    """
    sigma_m = sphere_area_float(m)
    if pid.family is PotentialFamily.A:
        phi = phi or TestFunction.gaussian()
        return sigma_m * _radial_integral(lambda rho: rho ** (m - 1) * scalar_potential(pid.k, m, x0, rho) * phi.radial(rho), x0)
    if pid.family is PotentialFamily.B:
        phi = phi or TestFunction.moment(1)
        return sigma_m / m * _radial_integral(
            lambda rho: rho ** (m + 1) * vector_potential_factor(pid.k, m, x0, rho) * phi.radial(rho), x0,
        )
    raise DomainError(f"Boundary pairing of {pid} is not defined", condition="family A or B")


def _richardson_halving(values: Sequence[float], orders: Sequence[int]) -> List[float]:
    table = list(values)
    for order in orders:
        factor = 2 ** order
        table = [(factor * table[i + 1] - table[i]) / (factor - 1) for i in range(len(table) - 1)]
    return table


def boundary_limit_test(
    pid: PotentialId,
    m: int,
    phi: Optional[TestFunction] = None,
    x0_seq: Optional[Sequence[float]] = None,
    tol: float = 1e-4,
) -> Dict[str, Any]:
    """
    Follow the pairing of A_k or B_k as x0 -> 0+ and compare with a_k, b_k.

    Args:
        pid: A or B potential
        m: dimension
        phi: built-in test function
        x0_seq: halving sequence of heights, 2^-j for j = 2..8 by default
        tol: relative tolerance on the extrapolated limit

    Returns:
        Convergence report with the pairings, errors, extrapolated limit,
        fitted decay order and the symbolic target
    """
    if pid.family is PotentialFamily.C:
        raise DomainError("Boundary limits are taken for A or B", condition="family A or B")
    x0_seq = list(x0_seq) if x0_seq is not None else [2.0 ** (-j) for j in range(2, 9)]
    if any(b >= a for a, b in zip(x0_seq, x0_seq[1:])):
        raise DomainError("Heights must decrease", condition="x0_seq strictly decreasing")

    side = "a" if pid.family is PotentialFamily.A else "b"
    symbolic = boundary_value(BoundaryValueId(side, pid.k), m)
    if side == "a":
        phi = phi or TestFunction.gaussian()
        target = pair_gaussian(symbolic, phi).scalar_part.real
    else:
        phi = phi or TestFunction.moment(1)
        target = pair_gaussian(symbolic, phi).vector_part[phi.index - 1].real

    values = [boundary_pairing(pid, m, x0, phi) for x0 in x0_seq]
    table = VerificationAnalytics.convergence_table(x0_seq, values, target)
    errors = table["error"].tolist()
    levels = min(3, len(values) - 1)
    extrapolated = _richardson_halving(values, [1, 2, 3][:levels])[-1]
    order = VerificationAnalytics.fitted_order(x0_seq, errors)
    limit_error = abs(extrapolated - target) / max(abs(target), 1e-300)
    report = {
        "potential": str(pid),
        "dim": m,
        "target": target,
        "x0": x0_seq,
        "values": values,
        "errors": errors,
        "local_orders": table["local_order"].tolist(),
        "extrapolated": extrapolated,
        "limit_error": limit_error,
        "fitted_order": order,
        "converged": limit_error <= tol,
    }
    logger.info(f"Boundary limit of {pid} in m={m}: error {limit_error:.2e}, order {order:.2f}")
    return report
