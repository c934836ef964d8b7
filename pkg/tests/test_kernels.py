from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from coeffring import ExactScalar, gamma_half
from distcalc import (
    NUMERIC, AtomKind, approx_equal, convolve, dirac_apply, equal, laplace_apply,
    make_delta, make_H, make_Tstar, make_Ustar,
)
from errors import DomainError, OutOfRange, UndefinedOperator
from kernels import (
    BoundaryValueId, OperatorFamily, OperatorId, boundary_value, fundamental_solution,
    kernel, log_kernel, pq_table,
)

D = OperatorFamily.DIRAC
HD = OperatorFamily.HILBERT_DIRAC
L = OperatorFamily.LAPLACE
LH = OperatorFamily.LAPLACE_HILBERT

dims = st.integers(min_value=2, max_value=8)
orders = st.integers(min_value=-6, max_value=6)


class TestKernelValues:
    def test_squared_dirac_in_three_dimensions(self):
        assert equal(kernel(OperatorId(D, 2), 3), make_Tstar(3, -5).scale(3))

    @given(dims)
    def test_order_zero(self, m):
        assert equal(kernel(OperatorId(D, 0), m), make_delta(m))
        assert equal(kernel(OperatorId(HD, 0), m), make_H(m))
        assert equal(kernel(OperatorId(L, 0), m), make_delta(m))
        assert equal(kernel(OperatorId(LH, 0), m), make_H(m))

    @given(dims)
    def test_order_one_is_the_dirac_operator(self, m):
        assert equal(kernel(OperatorId(D, 1), m), dirac_apply(make_delta(m)))

    @given(dims)
    def test_laplace_order_one(self, m):
        assert equal(kernel(OperatorId(L, 1), m), -laplace_apply(make_delta(m)))

    def test_fundamental_solution_of_dirac_in_three_dimensions(self):
        e_1 = fundamental_solution(OperatorId(D, 1), 3)
        expected = make_Ustar(3, -2).scale(-(ExactScalar(Fraction(1, 2)) * gamma_half(3) * ExactScalar(1, -5)))
        assert equal(e_1, expected)
        assert equal(dirac_apply(e_1), make_delta(3))

    @given(st.integers(min_value=1, max_value=4))
    def test_even_dimension_top_order_is_logarithmic(self, half):
        m = 2 * half
        op = OperatorId(D, -m)
        assert op.is_extended(m)
        assert equal(kernel(op, m), log_kernel(m, 0))

    @given(dims, orders)
    def test_hilbert_dirac_never_logarithmic_in_even_dimension(self, m, mu):
        assume(m % 2 == 0)
        assert not OperatorId(HD, mu).is_extended(m)

    @given(dims, orders)
    def test_dirac_never_logarithmic_in_odd_dimension(self, m, mu):
        assume(m % 2 == 1)
        assert not OperatorId(D, mu).is_extended(m)

    @given(dims, st.integers(min_value=-3, max_value=3))
    def test_cross_family_table(self, m, k):
        half = Fraction(1, 2)
        assert equal(kernel(OperatorId(L, k), m), kernel(OperatorId(D, 2 * k), m))
        assert equal(kernel(OperatorId(L, k + half), m), kernel(OperatorId(HD, 2 * k + 1), m))
        assert equal(kernel(OperatorId(LH, k), m), kernel(OperatorId(HD, 2 * k), m))
        assert equal(kernel(OperatorId(LH, k + half), m), kernel(OperatorId(D, 2 * k + 1), m))

    def test_exact_mode_needs_the_grid(self):
        with pytest.raises(UndefinedOperator):
            kernel(OperatorId(D, Fraction(1, 3)), 3)
        with pytest.raises(UndefinedOperator):
            kernel(OperatorId(L, Fraction(1, 4)), 3)


class TestNumericKernels:
    @given(dims, orders)
    def test_integer_valued_orders_take_the_exact_kernel(self, m, mu):
        op = OperatorId(D, mu)
        assert approx_equal(kernel(OperatorId(D, complex(mu)), m), kernel(op, m), 1e-12)

    @pytest.mark.parametrize("m, a, b", [
        (2, 0.25 + 0.25j, -0.125 + 0.5j),
        (3, 0.5j, 0.375 - 0.25j),
        (5, -0.625 + 0.125j, 0.5 + 0.25j),
    ])
    def test_numeric_semigroup(self, m, a, b):
        for family in (D, L):
            lhs = convolve(kernel(OperatorId(family, a), m), kernel(OperatorId(family, b), m))
            assert approx_equal(lhs, kernel(OperatorId(family, a + b), m), 1e-8)

    def test_fractional_dirac_has_both_parts(self):
        e = kernel(OperatorId(D, 0.5 + 0j), 3)
        assert e.mode == NUMERIC
        assert {atom.kind for atom in e.atoms} == {AtomKind.SCALAR_T, AtomKind.VECTOR_U}

    def test_fractional_laplace_is_scalar(self):
        e = kernel(OperatorId(L, 0.3 + 0.2j), 4)
        assert [atom.kind for atom in e.atoms] == [AtomKind.SCALAR_T]
        assert e.atoms[0].degree == complex(-4.6, -0.4)


class TestLogTable:
    @given(dims)
    def test_q1(self, m):
        p, q = pq_table(m, 1).entry(1)
        assert q == ExactScalar(Fraction(-1, m * 2 ** m), -2 * (m + 1))
        assert p == ExactScalar(Fraction(1, 2 ** m), -2 * (m + 1))

    @given(dims)
    def test_p0_is_the_plane_fundamental_solution_constant(self, m):
        p, q = pq_table(m, 0).entry(0)
        assert p == ExactScalar(Fraction(-1, 2 ** (m - 1)), -2 * m)
        assert q.is_zero

    @given(dims, st.integers(min_value=1, max_value=6))
    def test_dirac_lowers_the_index(self, m, n):
        assert equal(dirac_apply(log_kernel(m, n)), log_kernel(m, n - 1))

    def test_negative_index(self):
        with pytest.raises(DomainError):
            log_kernel(3, -1)


class TestBoundaryValues:
    @given(dims)
    def test_lowest_values(self, m):
        assert equal(boundary_value(BoundaryValueId("a", -1), m), make_delta(m))
        assert equal(boundary_value(BoundaryValueId("b", -1), m), make_H(m))

    def test_a1_in_five_dimensions(self):
        a_1 = boundary_value(BoundaryValueId("a", 1), 5)
        assert a_1.coefficient(AtomKind.SCALAR_T, -3) == ExactScalar(Fraction(1, 8), -6)

    @given(dims, st.integers(min_value=-6, max_value=6))
    def test_dirac_chain(self, m, k):
        assume(k <= m - 2)
        a_k = boundary_value(BoundaryValueId("a", k), m)
        assert equal(-dirac_apply(a_k), boundary_value(BoundaryValueId("b", k - 1), m))

    @pytest.mark.parametrize("side, k, m", [("a", 3, 4), ("a", 2, 3), ("b", 4, 4)])
    def test_out_of_range(self, side, k, m):
        with pytest.raises(OutOfRange):
            boundary_value(BoundaryValueId(side, k), m)

    def test_unknown_side(self):
        with pytest.raises(DomainError):
            BoundaryValueId("c", 0)
