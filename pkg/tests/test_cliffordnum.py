import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cliffordnum import (
    Multivector, blade_sign, e0_bar, e0_join, e0_split, geometric_product,
)
from errors import DimensionMismatch, DomainError

coefficient = st.floats(min_value=-10, max_value=10, allow_nan=False)


def multivectors(dim):
    return st.lists(coefficient, min_size=1 << dim, max_size=1 << dim).map(lambda c: Multivector(dim, c))


class TestBladeSign:
    @pytest.mark.parametrize("dim", [2, 3, 4])
    def test_generators_square_to_minus_one(self, dim):
        for j in range(dim):
            e = Multivector.basis(dim, j)
            assert e * e == Multivector.scalar(dim, -1.0)

    def test_generators_anticommute(self):
        e1, e2 = Multivector.basis(3, 1), Multivector.basis(3, 2)
        assert e1 * e2 == -(e2 * e1)

    def test_sign_table(self):
        assert blade_sign(0b01, 0b10) == 1
        assert blade_sign(0b10, 0b01) == -1
        assert blade_sign(0b11, 0b11) == -1


class TestGeometricProduct:
    @settings(max_examples=30, deadline=None)
    @given(multivectors(3), multivectors(3), multivectors(3))
    def test_associative(self, a, b, c):
        left = geometric_product(geometric_product(a, b), c)
        right = geometric_product(a, geometric_product(b, c))
        assert np.allclose(left.coeffs, right.coeffs, atol=1e-8)

    @given(st.lists(coefficient, min_size=3, max_size=3))
    def test_vector_squares_to_minus_norm(self, x):
        v = Multivector.space_vector(x)
        assert (v * v).allclose(Multivector.scalar(4, -float(np.dot(x, x))), tol=1e-9)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            Multivector.basis(2, 0) * Multivector.basis(3, 0)

    def test_unsupported_dimension(self):
        with pytest.raises(DomainError):
            Multivector(20)

    def test_wrong_coefficient_count(self):
        with pytest.raises(DimensionMismatch):
            Multivector(2, [1.0, 2.0])


class TestE0Split:
    @given(multivectors(3))
    def test_join_inverts_split(self, F):
        F1, F2 = e0_split(F)
        assert e0_join(F1, F2).allclose(F, tol=1e-12)

    @given(multivectors(3))
    def test_parts_free_of_e0(self, F):
        for part in e0_split(F):
            assert all(blade & 1 == 0 for blade in part.terms)

    def test_e0_bar_squares_to_minus_one(self):
        assert e0_bar(3) * e0_bar(3) == Multivector.scalar(3, -1.0)

    def test_e0_blade_goes_to_imaginary_part(self):
        F = Multivector.from_terms(3, {0b011: 2.0})
        F1, F2 = e0_split(F)
        assert F1 == Multivector(3)
        assert F2 == Multivector.from_terms(3, {0b010: -2.0})
