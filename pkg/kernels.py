"""
Kernels of the four convolution operator families and their fundamental solutions.

Every kernel is c A(m, mu) T*_{-m-mu} - s B(m, mu) U*_{-m-mu} with

    A(m, mu) = 2^mu Gamma((m + mu)/2) / pi^((m - mu)/2)
    B(m, mu) = 2^mu Gamma((m + mu + 1)/2) / pi^((m - mu + 1)/2)

and family weights (c, s): ((1 + e^{i pi mu})/2, (1 - e^{i pi mu})/2) for
powers of the Dirac operator, swapped for the Hilbert-Dirac family, (1, 0)
for powers of the Laplacian and (0, 1) for its Hilbert companion, with
mu = 2 beta for the Laplace families. Where the needed Gamma factor has a
pole the kernel is the logarithmic one, (p_n ln r + q_n) T*_n or U*_n with
n = -m - mu, built from the p/q recurrences.
"""
import cmath
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Tuple, Union

from coeffring import (
    ExactScalar, NumericScalar, gamma_complex, gamma_half, gamma_half_has_pole,
    pi_power,
)
from config import POLE_TOL
from distcalc import (
    EXACT, NUMERIC, AtomKind, DistExpr, integer_value, make_log_kernel,
)
from errors import DomainError, OutOfRange, UndefinedOperator

# Configure logging
logger = logging.getLogger(__name__)

Param = Union[int, Fraction, complex]


class OperatorFamily(Enum):
    """The four operator families, valued by their CLI names."""
    DIRAC = "dirac"
    HILBERT_DIRAC = "hilbert-dirac"
    LAPLACE = "laplace"
    LAPLACE_HILBERT = "laplace-hilbert"

    @property
    def is_laplace(self) -> bool:
        return self in (OperatorFamily.LAPLACE, OperatorFamily.LAPLACE_HILBERT)

    @property
    def is_hilbert(self) -> bool:
        return self in (OperatorFamily.HILBERT_DIRAC, OperatorFamily.LAPLACE_HILBERT)


def _param_mode(param: Param) -> str:
    if isinstance(param, (int, Fraction)) and not isinstance(param, bool):
        return EXACT
    return NUMERIC


@dataclass(frozen=True)
class OperatorId:
    """
    An operator family with its parameter (mu for Dirac families, beta for Laplace).
    """
    family: OperatorFamily
    param: Param

    @property
    def mode(self) -> str:
        return _param_mode(self.param)

    @property
    def order(self) -> Param:
        """Equivalent Dirac order mu (2 beta for the Laplace families)."""
        return 2 * self.param if self.family.is_laplace else self.param

    def inverse(self) -> "OperatorId":
        """Operator whose kernel is the fundamental solution of this one."""
        return OperatorId(self.family, -self.param)

    def log_index(self, m: int) -> Union[int, None]:
        """
        Index n of the logarithmic kernel used at this parameter, else None.
        """
        mu = integer_value(self.order)
        if mu is None:
            return None
        t_weight, u_weight = _exact_weights(self.family, mu)
        if t_weight and gamma_half_has_pole(m + mu):
            return -m - mu
        if u_weight and gamma_half_has_pole(m + mu + 1):
            return -m - mu
        return None

    def is_extended(self, m: int) -> bool:
        """True where the kernel takes its logarithmic extended definition."""
        return self.log_index(m) is not None

    def __str__(self):
        return f"{self.family.value}({self.param})"


def _exact_weights(family: OperatorFamily, mu: int) -> Tuple[int, int]:
    even = mu % 2 == 0
    if family is OperatorFamily.DIRAC:
        return (1, 0) if even else (0, 1)
    if family is OperatorFamily.HILBERT_DIRAC:
        return (0, 1) if even else (1, 0)
    if family is OperatorFamily.LAPLACE:
        return (1, 0)
    return (0, 1)


def _numeric_weights(family: OperatorFamily, mu: complex) -> Tuple[complex, complex]:
    if family is OperatorFamily.LAPLACE:
        return (1, 0)
    if family is OperatorFamily.LAPLACE_HILBERT:
        return (0, 1)
    phase = cmath.exp(1j * cmath.pi * mu)
    c, s = (1 + phase) / 2, (1 - phase) / 2
    if family is OperatorFamily.HILBERT_DIRAC:
        c, s = s, c
    return c, s


def coefficient_A(m: int, mu: int) -> ExactScalar:
    """2^mu Gamma((m + mu)/2) / pi^((m - mu)/2)."""
    return ExactScalar(Fraction(2) ** mu) * gamma_half(m + mu) * pi_power(mu - m)


def coefficient_B(m: int, mu: int) -> ExactScalar:
    """2^mu Gamma((m + mu + 1)/2) / pi^((m - mu + 1)/2)."""
    return ExactScalar(Fraction(2) ** mu) * gamma_half(m + mu + 1) * pi_power(mu - m - 1)


def _numeric_coefficient(m: int, mu: complex, shift: int) -> NumericScalar:
    value = gamma_complex((m + mu + shift) / 2)
    return value * NumericScalar.from_complex(2 ** mu * cmath.pi ** ((mu - m - shift) / 2))


@dataclass(frozen=True)
class PQTable:
    """
    Constants of the logarithmic kernels (p_n ln r + q_n) T*_n / U*_n.
    """
    dim: int
    p: Tuple[ExactScalar, ...]
    q: Tuple[ExactScalar, ...]

    def __len__(self):
        return len(self.p)

    def entry(self, n: int) -> Tuple[ExactScalar, ExactScalar]:
        return self.p[n], self.q[n]


@lru_cache(maxsize=None)
def pq_table(m: int, n_max: int) -> PQTable:
    """
    Exact p_n, q_n for n = 0..n_max.

    Starts from p_0 = -1/(2^{m-1} pi^m), q_0 = 0 and alternates the odd step
    (through -1/(2 pi)) and the even step (through 1/(2j + 2)).

    Args:
        m: dimension, at least 2
        n_max: last index

    Returns:
        PQTable with n_max + 1 entries
    """
    if m < 2 or n_max < 0:
        raise DomainError(f"pq_table needs m >= 2 and n_max >= 0, got ({m}, {n_max})", condition="m >= 2, n_max >= 0")
    p = [ExactScalar(Fraction(-1, 2 ** (m - 1)), -2 * m)]
    q = [ExactScalar(0)]
    minus_inv_two_pi = ExactScalar(Fraction(-1, 2), -2)
    for n in range(1, n_max + 1):
        pp, qq = p[-1], q[-1]
        if n % 2 == 1:
            j2 = n - 1
            p.append(pp * minus_inv_two_pi)
            q.append((qq - pp / (m + j2)) * minus_inv_two_pi)
        else:
            p.append(pp / n)
            q.append((qq - pp / n) / n)
    logger.debug(f"Built p/q table for m={m} up to n={n_max}")
    return PQTable(m, tuple(p), tuple(q))


def log_kernel(m: int, n: int, mode: str = EXACT) -> DistExpr:
    """
    (p_n ln r + q_n) T*_n for even n, (p_n ln r + q_n) U*_n for odd n.

    This is the fundamental solution of order m + n at the parameters where
    the regular formula has a Gamma pole.
    """
    if n < 0:
        raise DomainError(f"Log kernel index must be >= 0, got {n}", condition="n >= 0")
    p, q = pq_table(m, n).entry(n)
    expr = make_log_kernel(m, n, p, q)
    return expr if mode == EXACT else expr.to_numeric()


def kernel(op: OperatorId, m: int, mode: str = None) -> DistExpr:
    """
    Convolution kernel of an operator.

    Args:
        op: operator family and parameter
        m: dimension
        mode: force "numeric" output; defaults to the parameter's own mode

    Returns:
        The kernel as a DistExpr, logarithmic at the extended parameters

    Raises:
        UndefinedOperator: exact mode requested off the integer/half-integer grid
    """
    mode = mode or op.mode
    mu_exact = integer_value(op.order)
    if mu_exact is not None:
        expr = _exact_kernel(op.family, mu_exact, m)
        return expr if mode == EXACT else expr.to_numeric()
    if op.mode == EXACT:
        grid = "half-integer beta" if op.family.is_laplace else "integer mu"
        raise UndefinedOperator(
            f"No exact kernel for {op} (use numeric mode)",
            condition=f"exact mode needs {grid}",
        )
    if mode == EXACT:
        raise UndefinedOperator(f"Kernel of {op} is not exact", condition="numeric parameter")
    return _numeric_kernel(op.family, complex(op.order), m)


def _exact_kernel(family: OperatorFamily, mu: int, m: int) -> DistExpr:
    t_weight, u_weight = _exact_weights(family, mu)
    if (t_weight and gamma_half_has_pole(m + mu)) or (u_weight and gamma_half_has_pole(m + mu + 1)):
        logger.debug(f"{family.value} order {mu} in m={m} uses log kernel n={-m - mu}")
        return log_kernel(m, -m - mu)
    if t_weight:
        return DistExpr.single(m, AtomKind.SCALAR_T, -m - mu, coefficient_A(m, mu))
    return DistExpr.single(m, AtomKind.VECTOR_U, -m - mu, -coefficient_B(m, mu))


def _numeric_kernel(family: OperatorFamily, mu: complex, m: int) -> DistExpr:
    t_weight, u_weight = _numeric_weights(family, mu)
    expr = DistExpr.zero(m, NUMERIC)
    if abs(t_weight) > POLE_TOL:
        coeff = _numeric_coefficient(m, mu, 0) * t_weight
        expr = expr + DistExpr.single(m, AtomKind.SCALAR_T, -m - mu, coeff, NUMERIC)
    if abs(u_weight) > POLE_TOL:
        coeff = -(_numeric_coefficient(m, mu, 1) * u_weight)
        expr = expr + DistExpr.single(m, AtomKind.VECTOR_U, -m - mu, coeff, NUMERIC)
    return expr


def fundamental_solution(op: OperatorId, m: int, mode: str = None) -> DistExpr:
    """
    Fundamental solution of op: E_mu, F_mu, K_beta or L_beta.

    It is the kernel of the same family at the negated parameter, including
    the logarithmic cases.
    """
    return kernel(op.inverse(), m, mode)


# Boundary values


@dataclass(frozen=True)
class BoundaryValueId:
    """Boundary value a_k (side 'a') or b_k (side 'b')."""
    side: str
    k: int

    def __post_init__(self):
        if self.side not in ("a", "b"):
            raise DomainError(f"Unknown boundary side {self.side!r}", condition="side in {a, b}")

    def max_index(self, m: int) -> int:
        return m - 2 if self.side == "a" else m - 1

    def is_valid(self, m: int) -> bool:
        return self.k <= self.max_index(m)

    def __str__(self):
        return f"{self.side}_{self.k}"


def boundary_value(bid: BoundaryValueId, m: int) -> DistExpr:
    """
    Distributional boundary value a_k or b_k of the half-space potentials.

        a_k = (-1)^{k+1} 2^{-(k+1)} Gamma((m-k-1)/2) / pi^{(m+k+1)/2} T*_{-m+k+1}
        b_k = (-1)^k     2^{-(k+1)} Gamma((m-k)/2)   / pi^{(m+k+2)/2} U*_{-m+k+1}

    Args:
        bid: side and index
        m: dimension

    Returns:
        Exact DistExpr

    Raises:
        OutOfRange: the Gamma factor is not finite (k > m - 2 for a, k > m - 1 for b)
    """
    k = bid.k
    if not bid.is_valid(m):
        gamma_arg = "(m-k-1)/2" if bid.side == "a" else "(m-k)/2"
        raise OutOfRange(
            f"{bid} undefined in dimension {m}",
            condition=f"k <= {bid.max_index(m)} so that Gamma({gamma_arg}) is finite",
        )
    scale = ExactScalar(Fraction(1, 2) ** (k + 1))
    if bid.side == "a":
        sign = -1 if k % 2 == 0 else 1
        coeff = scale * gamma_half(m - k - 1) * pi_power(-(m + k + 1)) * sign
        return DistExpr.single(m, AtomKind.SCALAR_T, -m + k + 1, coeff)
    sign = 1 if k % 2 == 0 else -1
    coeff = scale * gamma_half(m - k) * pi_power(-(m + k + 2)) * sign
    return DistExpr.single(m, AtomKind.VECTOR_U, -m + k + 1, coeff)
