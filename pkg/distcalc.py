"""
Atom algebra of the normalized radial distributions T*_lambda and U*_lambda.

A DistExpr is a canonical finite sum of atoms in a fixed dimension m. Atoms
are T*_lambda (scalar, radial), U*_lambda (vector, omega-directed) and the
logarithmic variants ln(r) T*_{2j}, ln(r) U*_{2j+1}. Operator actions and the
convolution table act atomwise and are extended linearly.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Tuple, Union

from coeffring import (
    ExactScalar, NumericScalar, Scalar, gamma_complex, gamma_half,
    gamma_half_has_pole, make_scalar, pi_power,
)
from config import DEGREE_DECIMALS, POLE_TOL
from errors import (
    DimensionMismatch, DomainError, ExcludedParameters, LogShapeError,
    ModeError, UnsupportedLogAtom,
)

# Configure logging
logger = logging.getLogger(__name__)

Degree = Union[int, complex]

EXACT = "exact"
NUMERIC = "numeric"


class AtomKind(Enum):
    """Kinds of atoms, valued by their JSON tag."""
    SCALAR_T = "T"
    VECTOR_U = "U"
    LOG_T = "LogT"
    LOG_U = "LogU"

    @property
    def is_log(self) -> bool:
        return self in (AtomKind.LOG_T, AtomKind.LOG_U)

    @property
    def is_vector(self) -> bool:
        return self in (AtomKind.VECTOR_U, AtomKind.LOG_U)


_KIND_ORDER = {kind: index for index, kind in enumerate(AtomKind)}


def normalize_degree(degree, mode: str) -> Degree:
    """
    Coerce a degree to the representation used by the given mode.

    Exact degrees are ints; numeric degrees are complex numbers rounded to
    DEGREE_DECIMALS so that equal degrees reached by different routes merge.
    """
    if mode == EXACT:
        if isinstance(degree, bool):
            raise ModeError("Boolean is not a degree", condition="integer degree")
        if isinstance(degree, int):
            return degree
        if isinstance(degree, Fraction) and degree.denominator == 1:
            return int(degree)
        raise ModeError(
            f"Exact mode needs an integer degree, got {degree!r}",
            condition="degree on the integer grid (use numeric mode otherwise)",
        )
    z = complex(degree)
    return complex(round(z.real, DEGREE_DECIMALS) + 0.0, round(z.imag, DEGREE_DECIMALS) + 0.0)


def integer_value(x) -> Union[int, None]:
    """The integer x equals (within POLE_TOL in numeric form), else None."""
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else None
    z = complex(x)
    n = round(z.real)
    if abs(z - n) <= POLE_TOL:
        return int(n)
    return None


def _is_nonneg_with_parity(x, parity: int) -> bool:
    n = integer_value(x)
    return n is not None and n >= 0 and n % 2 == parity


@dataclass(frozen=True)
class Atom:
    """
    One term coeff * T*_degree, coeff * U*_degree or their ln(r) variants.

    Log atoms hold only the ln(r) part; the constant part of
    (p ln r + q) T*_{2j} is an ordinary T atom of the same degree.
    """
    kind: AtomKind
    degree: Degree
    coeff: Scalar

    def __post_init__(self):
        if self.kind.is_log:
            n = integer_value(self.degree)
            if self.kind is AtomKind.LOG_T:
                ok = n is not None and n >= 0 and n % 2 == 0
                shape = "LogT degree must be an even integer >= 0"
            else:
                ok = n is not None and n >= 1 and n % 2 == 1
                shape = "LogU degree must be an odd integer >= 1"
            if not ok:
                raise LogShapeError(f"{self.kind.value} atom at degree {self.degree}", condition=shape)

    @property
    def key(self) -> Tuple[AtomKind, Degree]:
        return (self.kind, self.degree)

    def sort_key(self):
        z = complex(self.degree)
        return (_KIND_ORDER[self.kind], z.real, z.imag)


@dataclass(frozen=True)
class DistExpr:
    """
    Canonical finite sum of atoms in dimension m.

    At most one atom per (kind, degree), no zero coefficients, ordered by
    kind then degree. Canonicalization happens on construction.
    """
    dim: int
    atoms: Tuple[Atom, ...] = field(default_factory=tuple)
    mode: str = EXACT

    def __post_init__(self):
        if self.dim < 2:
            raise DomainError(f"Dimension m = {self.dim} too small", condition="m >= 2")
        if self.mode not in (EXACT, NUMERIC):
            raise ModeError(f"Unknown mode {self.mode!r}", condition="mode in {exact, numeric}")
        merged: Dict[Tuple[AtomKind, Degree], Scalar] = {}
        for atom in self.atoms:
            coeff = _coerce_coeff(atom.coeff, self.mode)
            degree = normalize_degree(atom.degree, self.mode)
            key = (atom.kind, degree)
            merged[key] = merged[key] + coeff if key in merged else coeff
        atoms = [Atom(kind, degree, coeff) for (kind, degree), coeff in merged.items() if not coeff.is_zero]
        atoms.sort(key=Atom.sort_key)
        object.__setattr__(self, "atoms", tuple(atoms))

    # Construction helpers

    @classmethod
    def zero(cls, dim: int, mode: str = EXACT) -> "DistExpr":
        return cls(dim, (), mode)

    @classmethod
    def single(cls, dim: int, kind: AtomKind, degree, coeff, mode: str = EXACT) -> "DistExpr":
        return cls(dim, (Atom(kind, degree, coeff),), mode)

    # Properties

    @property
    def is_zero(self) -> bool:
        return not self.atoms

    @property
    def has_log(self) -> bool:
        return any(atom.kind.is_log for atom in self.atoms)

    def coefficient(self, kind: AtomKind, degree) -> Scalar:
        """Coefficient of the (kind, degree) atom, zero when absent."""
        degree = normalize_degree(degree, self.mode)
        for atom in self.atoms:
            if atom.kind is kind and atom.degree == degree:
                return atom.coeff
        return make_scalar(0, self.mode)

    # Linear structure

    def _align(self, other: "DistExpr") -> Tuple["DistExpr", "DistExpr"]:
        if other.dim != self.dim:
            raise DimensionMismatch(
                f"Expressions live in dimensions {self.dim} and {other.dim}",
                condition="equal dimension m",
            )
        if self.mode != other.mode:
            return self.to_numeric(), other.to_numeric()
        return self, other

    def __add__(self, other: "DistExpr") -> "DistExpr":
        left, right = self._align(other)
        return DistExpr(left.dim, left.atoms + right.atoms, left.mode)

    def __neg__(self) -> "DistExpr":
        return DistExpr(self.dim, tuple(Atom(a.kind, a.degree, -a.coeff) for a in self.atoms), self.mode)

    def __sub__(self, other: "DistExpr") -> "DistExpr":
        return self + (-other)

    def scale(self, factor) -> "DistExpr":
        """Multiply every coefficient by a scalar."""
        if self.mode == EXACT and isinstance(factor, NumericScalar):
            return self.to_numeric().scale(factor)
        factor = _coerce_coeff(factor, self.mode)
        return DistExpr(self.dim, tuple(Atom(a.kind, a.degree, a.coeff * factor) for a in self.atoms), self.mode)

    def to_numeric(self) -> "DistExpr":
        if self.mode == NUMERIC:
            return self
        return DistExpr(self.dim, self.atoms, NUMERIC)

    def __str__(self):
        return render_text(self)


def _coerce_coeff(coeff, mode: str) -> Scalar:
    if mode == NUMERIC:
        if isinstance(coeff, (ExactScalar, NumericScalar)):
            return coeff.to_numeric()
        return NumericScalar.from_complex(complex(coeff))
    if isinstance(coeff, ExactScalar):
        return coeff
    if isinstance(coeff, (int, Fraction)) and not isinstance(coeff, bool):
        return ExactScalar(Fraction(coeff))
    raise ModeError(f"Exact expression cannot hold coefficient {coeff!r}", condition="exact coefficient")


def render_text(expr: DistExpr) -> str:
    """Human-readable rendering, e.g. '1/2*pi^(-3/2) T*[-3] + ...'."""
    if expr.is_zero:
        return "0"
    names = {
        AtomKind.SCALAR_T: "T*",
        AtomKind.VECTOR_U: "U*",
        AtomKind.LOG_T: "ln(r) T*",
        AtomKind.LOG_U: "ln(r) U*",
    }
    parts = []
    for atom in expr.atoms:
        degree = atom.degree
        if isinstance(degree, complex) and degree.imag == 0:
            degree = degree.real
        parts.append(f"{atom.coeff} {names[atom.kind]}[{degree}]")
    return " + ".join(parts)


# Constructors


def make_Tstar(m: int, degree, mode: str = EXACT) -> DistExpr:
    """Unit atom T*_degree."""
    return DistExpr.single(m, AtomKind.SCALAR_T, degree, make_scalar(1, mode), mode)


def make_Ustar(m: int, degree, mode: str = EXACT) -> DistExpr:
    """Unit atom U*_degree."""
    return DistExpr.single(m, AtomKind.VECTOR_U, degree, make_scalar(1, mode), mode)


def make_delta(m: int, mode: str = EXACT) -> DistExpr:
    """delta = Gamma(m/2) / pi^(m/2) T*_{-m}."""
    coeff = gamma_half(m) * pi_power(-m)
    expr = DistExpr.single(m, AtomKind.SCALAR_T, -m, coeff, EXACT)
    return expr if mode == EXACT else expr.to_numeric()


def make_H(m: int, mode: str = EXACT) -> DistExpr:
    """Hilbert kernel H = -(2 / sigma_{m+1}) U*_{-m}."""
    coeff = -(gamma_half(m + 1) * pi_power(-(m + 1)))
    expr = DistExpr.single(m, AtomKind.VECTOR_U, -m, coeff, EXACT)
    return expr if mode == EXACT else expr.to_numeric()


def make_log_kernel(m: int, degree: int, p: Scalar, q: Scalar, mode: str = EXACT) -> DistExpr:
    """
    (p ln r + q) T*_degree for even degree, (p ln r + q) U*_degree for odd.
    """
    if degree % 2 == 0:
        log_kind, plain_kind = AtomKind.LOG_T, AtomKind.SCALAR_T
    else:
        log_kind, plain_kind = AtomKind.LOG_U, AtomKind.VECTOR_U
    return DistExpr(m, (Atom(log_kind, degree, p), Atom(plain_kind, degree, q)), mode)


# Operator actions


def _over_two_pi(value, mode: str) -> Scalar:
    """value / (2 pi)."""
    if mode == EXACT:
        return make_scalar(Fraction(value) / 2, mode, -2)
    return make_scalar(complex(value) / 2, mode, -2)


def _two_pi(mode: str) -> Scalar:
    return make_scalar(2, mode, 2)


def _log_index(atom: Atom) -> int:
    return integer_value(atom.degree)


def dirac_apply(e: DistExpr) -> DistExpr:
    """
    Apply the Dirac operator.

    T*_l -> l U*_{l-1}, U*_l -> -2 pi T*_{l-1}; on log atoms the ln(r) factor
    is differentiated through d(ln r) = x / r^2.

    Args:
        e: expression

    Returns:
        The Dirac derivative of e
    """
    m, mode = e.dim, e.mode
    out: List[Atom] = []
    for atom in e.atoms:
        c, lam = atom.coeff, atom.degree
        if atom.kind is AtomKind.SCALAR_T:
            out.append(Atom(AtomKind.VECTOR_U, lam - 1, c * make_scalar(lam, mode)))
        elif atom.kind is AtomKind.VECTOR_U:
            out.append(Atom(AtomKind.SCALAR_T, lam - 1, -(c * _two_pi(mode))))
        elif atom.kind is AtomKind.LOG_T:
            n = _log_index(atom)
            if n > 0:
                out.append(Atom(AtomKind.LOG_U, n - 1, c * make_scalar(n, mode)))
            out.append(Atom(AtomKind.VECTOR_U, n - 1, c))
        else:
            n = _log_index(atom)
            out.append(Atom(AtomKind.LOG_T, n - 1, -(c * _two_pi(mode))))
            # (x / r^2) U*_{2j+1} = -(2 pi / (m + 2j)) T*_{2j}
            factor = Fraction(2, m + n - 1) if mode == EXACT else 2 / (m + n - 1)
            out.append(Atom(AtomKind.SCALAR_T, n - 1, -(c * make_scalar(factor, mode, 2))))
    return DistExpr(m, tuple(out), mode)


def laplace_apply(e: DistExpr) -> DistExpr:
    """
    Apply the Laplace operator.

    T*_l -> 2 pi l T*_{l-2}, U*_l -> 2 pi (l - 1) U*_{l-2}; log atoms are
    handled as minus the squared Dirac operator.
    """
    m, mode = e.dim, e.mode
    plain: List[Atom] = []
    logs: List[Atom] = []
    for atom in e.atoms:
        c, lam = atom.coeff, atom.degree
        if atom.kind is AtomKind.SCALAR_T:
            plain.append(Atom(AtomKind.SCALAR_T, lam - 2, c * _two_pi(mode) * make_scalar(lam, mode)))
        elif atom.kind is AtomKind.VECTOR_U:
            plain.append(Atom(AtomKind.VECTOR_U, lam - 2, c * _two_pi(mode) * make_scalar(lam - 1, mode)))
        else:
            logs.append(atom)
    result = DistExpr(m, tuple(plain), mode)
    if logs:
        result = result - dirac_apply(dirac_apply(DistExpr(m, tuple(logs), mode)))
    return result


def vector_multiply(e: DistExpr) -> DistExpr:
    """
    Left multiplication by x.

    Raises:
        UnsupportedLogAtom: e contains a logarithmic atom
    """
    m, mode = e.dim, e.mode
    out: List[Atom] = []
    for atom in e.atoms:
        c, lam = atom.coeff, atom.degree
        if atom.kind.is_log:
            raise UnsupportedLogAtom(
                "No multiplication rule by x for logarithmic atoms",
                condition="log-free expression",
            )
        if atom.kind is AtomKind.SCALAR_T:
            out.append(Atom(AtomKind.VECTOR_U, lam + 1, c * _over_two_pi(lam + m, mode)))
        else:
            out.append(Atom(AtomKind.SCALAR_T, lam + 1, -c))
    return DistExpr(m, tuple(out), mode)


def r2_multiply(e: DistExpr) -> DistExpr:
    """Multiplication by r^2; ln(r) factors ride along unchanged."""
    m, mode = e.dim, e.mode
    out: List[Atom] = []
    for atom in e.atoms:
        c, lam = atom.coeff, atom.degree
        shift = m if not atom.kind.is_vector else m + 1
        out.append(Atom(atom.kind, lam + 2, c * _over_two_pi(lam + shift, mode)))
    return DistExpr(m, tuple(out), mode)


# Convolution


def gamma_ratio(numerator: Iterable, denominator: Iterable, mode: str) -> Scalar:
    """
    prod Gamma(a/2) over numerator / prod Gamma(b/2) over denominator.

    Arguments are given doubled. Poles are counted before anything is
    evaluated: a net denominator pole gives zero, a net or matched numerator
    pole is not a value.

    Raises:
        ExcludedParameters: numerator poles not strictly outnumbered
    """
    numerator, denominator = list(numerator), list(denominator)
    if mode == EXACT:
        num_poles = sum(gamma_half_has_pole(a) for a in numerator)
        den_poles = sum(gamma_half_has_pole(b) for b in denominator)
    else:
        num_values = [gamma_complex(complex(a) / 2) for a in numerator]
        den_values = [gamma_complex(complex(b) / 2) for b in denominator]
        num_poles = sum(v.is_pole for v in num_values)
        den_poles = sum(v.is_pole for v in den_values)
    if den_poles > num_poles:
        return make_scalar(0, mode)
    if num_poles:
        raise ExcludedParameters(
            f"Gamma ratio has {num_poles} numerator and {den_poles} denominator poles",
            condition="no Gamma pole in the convolution coefficient",
        )
    if mode == EXACT:
        result = ExactScalar(1)
        for a in numerator:
            result = result * gamma_half(a)
        for b in denominator:
            result = result / gamma_half(b)
        return result
    result = NumericScalar(1.0, 0.0)
    for v in num_values:
        result = result * v
    for v in den_values:
        result = result / v
    return result


def _excluded(condition: str, alpha, beta):
    raise ExcludedParameters(
        f"Convolution undefined at alpha = {alpha}, beta = {beta}",
        condition=condition,
    )


def _convolve_pair(a: Atom, b: Atom, m: int, mode: str) -> Atom:
    if a.kind.is_log or b.kind.is_log:
        raise UnsupportedLogAtom("Logarithmic atoms are not convolved", condition="log-free operands")
    if a.kind is AtomKind.SCALAR_T and b.kind is AtomKind.VECTOR_U:
        a, b = b, a
    alpha, beta = a.degree, b.degree
    coeff = a.coeff * b.coeff
    if a.kind is AtomKind.SCALAR_T:
        if _is_nonneg_with_parity(alpha, 0):
            _excluded("alpha = 2j for T*_alpha * T*_beta", alpha, beta)
        if _is_nonneg_with_parity(beta, 0):
            _excluded("beta = 2k for T*_alpha * T*_beta", alpha, beta)
        if _is_nonneg_with_parity(alpha + beta + m, 0):
            _excluded("alpha + beta + m = 2l for T*_alpha * T*_beta", alpha, beta)
        ratio = gamma_ratio([-(alpha + beta + m)], [-alpha, -beta], mode)
        return Atom(AtomKind.SCALAR_T, alpha + beta + m, coeff * ratio * make_scalar(1, mode, m))
    if b.kind is AtomKind.SCALAR_T:
        if _is_nonneg_with_parity(alpha, 1):
            _excluded("alpha = 2j + 1 for U*_alpha * T*_beta", alpha, beta)
        if _is_nonneg_with_parity(beta, 0):
            _excluded("beta = 2k for U*_alpha * T*_beta", alpha, beta)
        if _is_nonneg_with_parity(alpha + beta + m - 1, 0):
            _excluded("alpha + beta = -m + 2l + 1 for U*_alpha * T*_beta", alpha, beta)
        ratio = gamma_ratio([-(alpha + beta + m - 1)], [1 - alpha, -beta], mode)
        return Atom(AtomKind.VECTOR_U, alpha + beta + m, coeff * ratio * make_scalar(1, mode, m))
    if _is_nonneg_with_parity(alpha, 1):
        _excluded("alpha = 2j + 1 for U*_alpha * U*_beta", alpha, beta)
    if _is_nonneg_with_parity(beta, 1):
        _excluded("beta = 2k + 1 for U*_alpha * U*_beta", alpha, beta)
    if _is_nonneg_with_parity(alpha + beta + m, 0):
        _excluded("alpha + beta = -m + 2l for U*_alpha * U*_beta", alpha, beta)
    ratio = gamma_ratio([-(alpha + beta + m)], [1 - alpha, 1 - beta], mode)
    return Atom(AtomKind.SCALAR_T, alpha + beta + m, coeff * ratio * make_scalar(1, mode, m + 2))


def convolve(e1: DistExpr, e2: DistExpr) -> DistExpr:
    """
    Convolution of two log-free expressions.

    Args:
        e1: left operand
        e2: right operand

    Returns:
        e1 * e2

    Raises:
        ExcludedParameters: some atom pair falls on an excluded parameter set
        UnsupportedLogAtom: an operand contains a logarithmic atom
        DimensionMismatch: operands of different dimension
    """
    left, right = e1._align(e2)
    m, mode = left.dim, left.mode
    out = [
        _convolve_pair(a, b, m, mode)
        for a in left.atoms
        for b in right.atoms
    ]
    logger.debug(f"Convolved {len(left.atoms)}x{len(right.atoms)} atoms in dimension {m}")
    return DistExpr(m, tuple(out), mode)


def hilbert(e: DistExpr) -> DistExpr:
    """Hilbert transform H * e."""
    return convolve(make_H(e.dim, e.mode), e)


# Comparison


def equal(e1: DistExpr, e2: DistExpr) -> bool:
    """Structural equality of canonical forms."""
    left, right = e1._align(e2)
    return left.atoms == right.atoms


def approx_equal(e1: DistExpr, e2: DistExpr, tol: float) -> bool:
    """
    Coefficientwise closeness after numeric conversion.

    Raises:
        PoleError: a coefficient is a flagged pole
    """
    left, right = e1._align(e2)
    left, right = left.to_numeric(), right.to_numeric()
    keys = {atom.key for atom in left.atoms} | {atom.key for atom in right.atoms}
    for kind, degree in keys:
        if not left.coefficient(kind, degree).isclose(right.coefficient(kind, degree), tol):
            return False
    return True
