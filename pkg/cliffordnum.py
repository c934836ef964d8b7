"""
Clifford algebra R_{0,m+1} with floating coefficients.

Basis blades are bitsets over {e_0, ..., e_m}; every generator squares to -1.
Coefficients are stored densely in a read-only numpy array indexed by blade.
"""
import logging
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

from config import MAX_CLIFFORD_DIM
from errors import DimensionMismatch, DomainError

# Configure logging
logger = logging.getLogger(__name__)


def _popcount(x: int) -> int:
    return bin(x).count("1")


def blade_sign(a: int, b: int) -> int:
    """
    Sign of e_A e_B = sign * e_{A xor B}.

    Counts the transpositions needed to sort the concatenated generators and
    one extra factor -1 for every generator the two blades share.
    """
    swaps = 0
    shifted = a >> 1
    while shifted:
        swaps += _popcount(shifted & b)
        shifted >>= 1
    swaps += _popcount(a & b)
    return -1 if swaps & 1 else 1


class Multivector:
    """
    Element of R_{0,dim}, dim = m + 1, with generators e_0 .. e_m.
    """

    __slots__ = ("dim", "coeffs")

    def __init__(self, dim: int, coeffs: Optional[Iterable[float]] = None):
        if dim < 1 or dim > MAX_CLIFFORD_DIM:
            raise DomainError(
                f"Clifford dimension {dim} not supported",
                condition=f"1 <= m + 1 <= {MAX_CLIFFORD_DIM}",
            )
        size = 1 << dim
        if coeffs is None:
            array = np.zeros(size)
        else:
            array = np.array(coeffs, dtype=float)
            if array.shape != (size,):
                raise DimensionMismatch(
                    f"Expected {size} blade coefficients, got shape {array.shape}",
                    condition="len(coeffs) = 2^dim",
                )
        array.setflags(write=False)
        self.dim = dim
        self.coeffs = array

    # Constructors

    @classmethod
    def from_terms(cls, dim: int, terms: Dict[int, float]) -> "Multivector":
        array = np.zeros(1 << dim)
        for blade, value in terms.items():
            if blade < 0 or blade >= (1 << dim):
                raise DomainError(f"Blade {blade:b} outside dimension {dim}", condition="blade within {0..m}")
            array[blade] += value
        return cls(dim, array)

    @classmethod
    def scalar(cls, dim: int, value: float) -> "Multivector":
        return cls.from_terms(dim, {0: value})

    @classmethod
    def basis(cls, dim: int, index: int) -> "Multivector":
        """The generator e_index."""
        return cls.from_terms(dim, {1 << index: 1.0})

    @classmethod
    def vector(cls, dim: int, components: Iterable[float], start: int = 0) -> "Multivector":
        """sum_j components[j] e_{start + j}."""
        terms = {}
        for offset, value in enumerate(components):
            terms[1 << (start + offset)] = float(value)
        return cls.from_terms(dim, terms)

    @classmethod
    def space_vector(cls, x_vec: Iterable[float]) -> "Multivector":
        """x = sum_j x_j e_j for j = 1..m, in dimension m + 1."""
        x_vec = list(x_vec)
        return cls.vector(len(x_vec) + 1, x_vec, start=1)

    # Views

    @property
    def terms(self) -> Dict[int, float]:
        """Nonzero coefficients keyed by blade bitset."""
        return {int(b): float(self.coeffs[b]) for b in np.flatnonzero(self.coeffs)}

    @property
    def scalar_part(self) -> float:
        return float(self.coeffs[0])

    def vector_part(self, start: int = 1) -> np.ndarray:
        """Coefficients of e_start .. e_{dim-1}."""
        return np.array([self.coeffs[1 << j] for j in range(start, self.dim)])

    def norm(self) -> float:
        """Euclidean norm of the coefficient array."""
        return float(np.linalg.norm(self.coeffs))

    # Arithmetic

    def _check(self, other: "Multivector"):
        if other.dim != self.dim:
            raise DimensionMismatch(
                f"Multivector dimensions differ: {self.dim} vs {other.dim}",
                condition="equal dims",
            )

    def __add__(self, other: "Multivector") -> "Multivector":
        self._check(other)
        return Multivector(self.dim, self.coeffs + other.coeffs)

    def __sub__(self, other: "Multivector") -> "Multivector":
        self._check(other)
        return Multivector(self.dim, self.coeffs - other.coeffs)

    def __neg__(self) -> "Multivector":
        return Multivector(self.dim, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return geometric_product(self, other)
        return Multivector(self.dim, self.coeffs * float(other))

    def __rmul__(self, other):
        return Multivector(self.dim, self.coeffs * float(other))

    def __truediv__(self, other: float) -> "Multivector":
        return Multivector(self.dim, self.coeffs / float(other))

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.coeffs, other.coeffs)

    def allclose(self, other: "Multivector", tol: float = 1e-12) -> bool:
        self._check(other)
        return bool(np.allclose(self.coeffs, other.coeffs, rtol=tol, atol=tol))

    def __repr__(self):
        parts = []
        for blade, value in self.terms.items():
            name = "".join(str(j) for j in range(self.dim) if blade >> j & 1)
            parts.append(f"{value:+.6g}" + (f"e{name}" if name else ""))
        return f"Multivector(dim={self.dim}, {' '.join(parts) or '0'})"


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    """
    Clifford product under e_i e_j + e_j e_i = -2 delta_ij.

    Args:
        a: left factor
        b: right factor

    Returns:
        The product a b

    Raises:
        DimensionMismatch: a and b live in different algebras
    """
    a._check(b)
    out = np.zeros(1 << a.dim)
    left = np.flatnonzero(a.coeffs)
    right = np.flatnonzero(b.coeffs)
    for i in left:
        ai = a.coeffs[i]
        for j in right:
            out[i ^ j] += blade_sign(int(i), int(j)) * ai * b.coeffs[j]
    return Multivector(a.dim, out)


def e0_bar(dim: int) -> Multivector:
    """The conjugate generator -e_0."""
    return -Multivector.basis(dim, 0)


def e0_split(F: Multivector) -> Tuple[Multivector, Multivector]:
    """
    Split F = F1 + conj(e_0) F2 with F1, F2 free of e_0.

    A blade e_0 e_A with coefficient c equals conj(e_0) (-c e_A), so it lands in
    F2 with the sign flipped.

    Args:
        F: multivector in R_{0,m+1}

    Returns:
        (F1, F2), the real and imaginary parts
    """
    f1 = np.zeros_like(F.coeffs)
    f2 = np.zeros_like(F.coeffs)
    for blade in np.flatnonzero(F.coeffs):
        value = F.coeffs[blade]
        if blade & 1:
            f2[blade ^ 1] -= value
        else:
            f1[blade] += value
    return Multivector(F.dim, f1), Multivector(F.dim, f2)


def e0_join(F1: Multivector, F2: Multivector) -> Multivector:
    """Inverse of e0_split: F1 + conj(e_0) F2."""
    return F1 + geometric_product(e0_bar(F1.dim), F2)
