import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import psi

from coeffring import ExactScalar, sphere_area_float
from distcalc import NUMERIC, convolve, make_delta, make_log_kernel, make_Tstar, make_Ustar
from errors import DomainError
from kernels import BoundaryValueId, boundary_value
from oracle import (
    PairingResult, TestFunction, convolution_double_integral, delta_derivative,
    pair_gaussian, pair_quadrature, taylor_by_differences,
)


class TestTestFunction:
    def test_gaussian_taylor(self):
        phi = TestFunction.gaussian()
        assert [phi.taylor_coefficient(k) for k in range(5)] == [1, 0, -1, 0, 0.5]

    def test_poly_gaussian_taylor_is_shifted(self):
        phi = TestFunction.poly_gaussian(2)
        assert phi.taylor_coefficient(2) == 0
        assert phi.taylor_coefficient(4) == 1
        assert phi.taylor_coefficient(6) == -1

    def test_remainder(self):
        phi = TestFunction.gaussian()
        assert phi.remainder(0.5, 2) == pytest.approx(math.exp(-0.25) - 0.75, rel=1e-12)

    def test_custom_profile_limited_by_taylor_data(self):
        phi = TestFunction.custom(lambda r: 1 / (1 + r * r) ** 3, [1, 0, -3])
        assert phi.smoothness == 2
        with pytest.raises(DomainError):
            phi.taylor_coefficient(3)

    def test_moment_needs_index(self):
        with pytest.raises(DomainError):
            TestFunction(TestFunction.moment(1).kind)

    @pytest.mark.parametrize("order, expected", [(0, 1.0), (2, -1.0), (4, 0.5)])
    def test_taylor_by_differences(self, order, expected):
        assert taylor_by_differences(TestFunction.gaussian(), order) == pytest.approx(expected, rel=1e-5)


class TestGaussianPairing:
    @given(st.integers(min_value=2, max_value=7), st.floats(min_value=-12, max_value=4))
    def test_scalar_atom(self, m, lam):
        result = pair_gaussian(make_Tstar(m, lam, NUMERIC))
        expected = sphere_area_float(m) / 2 * math.pi ** ((lam + m) / 2)
        assert result.scalar_part.real == pytest.approx(expected, rel=1e-10)
        assert not result.vector_part.any()

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_delta_pairs_to_phi_at_zero(self, m):
        assert pair_gaussian(make_delta(m)).scalar_part == pytest.approx(1.0)

    def test_vector_atom_fills_every_component_by_default(self):
        result = pair_gaussian(make_Ustar(3, -1))
        expected = sphere_area_float(3) / 6 * math.pi ** 1.5
        assert np.allclose(result.vector_part, expected)
        assert result.scalar_part == 0

    def test_moment_picks_one_component(self):
        result = pair_gaussian(make_Ustar(4, -2), TestFunction.moment(2))
        assert result.vector_part[0] == 0
        assert result.vector_part[1] != 0

    def test_moment_component_must_exist(self):
        with pytest.raises(DomainError):
            pair_gaussian(make_Ustar(3, -2), TestFunction.moment(5))

    def test_log_atom_uses_digamma(self):
        m = 4
        e = make_log_kernel(m, 2, ExactScalar(1), ExactScalar(0))
        s = 2 + m
        expected = sphere_area_float(m) / 2 * math.pi ** (s / 2) * psi(s / 2) / 2
        assert pair_gaussian(e).scalar_part.real == pytest.approx(expected, rel=1e-12)

    def test_custom_profile_rejected(self):
        phi = TestFunction.custom(lambda r: math.exp(-r), [1, -1])
        with pytest.raises(DomainError):
            pair_gaussian(make_delta(3), phi)

    def test_boundary_value_a1(self):
        # a_1 = 1/(8 pi^2) r^-3 in R^5
        a_1 = boundary_value(BoundaryValueId("a", 1), 5)
        direct = 1 / (8 * math.pi ** 2) * sphere_area_float(5) * 0.5  # int r^{-3} e^{-r^2} r^4 dr = 1/2
        assert pair_gaussian(a_1).scalar_part.real == pytest.approx(direct, rel=1e-12)


class TestQuadrature:
    @pytest.mark.parametrize("m, lam", [(3, -1.5), (3, -4.5), (4, -7.25), (2, 0.5), (5, -2)])
    def test_scalar_atoms_agree_with_closed_form(self, m, lam):
        e = make_Tstar(m, lam, NUMERIC)
        assert pair_quadrature(e).isclose(pair_gaussian(e), rel_tol=1e-7)

    @pytest.mark.parametrize("m, lam", [(3, -2.5), (4, -6.5), (3, 1)])
    def test_vector_atoms_agree_with_closed_form(self, m, lam):
        e = make_Ustar(m, lam, NUMERIC)
        assert pair_quadrature(e).isclose(pair_gaussian(e), rel_tol=1e-7)

    @pytest.mark.parametrize("m, n", [(2, 0), (3, 2), (4, 1)])
    def test_log_atoms_agree_with_closed_form(self, m, n):
        e = make_log_kernel(m, n, ExactScalar(1), ExactScalar(2))
        assert pair_quadrature(e).isclose(pair_gaussian(e), rel_tol=1e-7)

    def test_delta_grid_goes_through_residue(self):
        m = 3
        e = make_Tstar(m, -m - 4)
        result = pair_quadrature(e)
        assert result.metadata["residue_degrees"] == [-4]
        assert result.isclose(pair_gaussian(e), rel_tol=1e-12)

    def test_custom_profile_matches_gaussian(self):
        phi = TestFunction.custom(lambda r: math.exp(-r * r), [1, 0, -1, 0, 0.5])
        e = make_Tstar(3, -4.5, NUMERIC)
        assert pair_quadrature(e, phi).isclose(pair_gaussian(e), rel_tol=1e-7)

    def test_subtraction_order_too_low(self):
        with pytest.raises(DomainError):
            pair_quadrature(make_Tstar(3, -6.5, NUMERIC), subtraction_order=1)

    def test_higher_subtraction_order_does_not_change_the_value(self):
        e = make_Tstar(3, -4.5, NUMERIC)
        base = pair_quadrature(e)
        raised = pair_quadrature(e, subtraction_order=6)
        assert raised.isclose(base, rel_tol=1e-7)
        assert raised.metadata["subtraction_orders"] == [6]

    def test_pole_moment_is_dropped(self):
        # s = -1: the r^1 moment sits on the pole
        e = make_Tstar(3, -4, NUMERIC)
        result = pair_quadrature(e, TestFunction.custom(lambda r: math.exp(-r), [1, -1, 0.5, -1 / 6]), subtraction_order=2)
        assert result.metadata["dropped_moments"] == [1]


class TestDeltaDerivative:
    @pytest.mark.parametrize("m", [2, 3, 5])
    @pytest.mark.parametrize("l", [0, 1, 2])
    def test_scalar_grid_matches_closed_form(self, m, l):
        e = make_Tstar(m, -m - 2 * l)
        assert delta_derivative(m, -m - 2 * l).isclose(pair_gaussian(e), rel_tol=1e-6)

    @pytest.mark.parametrize("m", [2, 4])
    def test_vector_grid_matches_closed_form(self, m):
        e = make_Ustar(m, -m - 1)
        assert delta_derivative(m, -m - 1).isclose(pair_gaussian(e), rel_tol=1e-6)

    def test_off_grid_degree(self):
        with pytest.raises(DomainError):
            delta_derivative(3, -2)


class TestDoubleIntegral:
    @pytest.mark.slow
    def test_riesz_pair_in_three_dimensions(self):
        result = convolution_double_integral(-2.0, -2.0, 3)
        assert result.scalar_part.real == pytest.approx(2 * math.pi ** 4, rel=1e-5)

    @pytest.mark.slow
    @settings(max_examples=5, deadline=None)
    @given(st.floats(min_value=-2.6, max_value=-1.6), st.floats(min_value=-2.6, max_value=-1.6))
    def test_matches_convolution_calculus(self, alpha, beta):
        expr = convolve(make_Tstar(3, alpha, NUMERIC), make_Tstar(3, beta, NUMERIC))
        result = convolution_double_integral(alpha, beta, 3)
        assert result.isclose(pair_gaussian(expr), rel_tol=1e-5)

    @pytest.mark.slow
    def test_slowly_decaying_tail(self):
        alpha, beta = -2.0, -1.75
        expr = convolve(make_Tstar(3, alpha, NUMERIC), make_Tstar(3, beta, NUMERIC))
        result = convolution_double_integral(alpha, beta, 3)
        assert result.isclose(pair_gaussian(expr), rel_tol=1e-5)

    def test_divergent_degrees(self):
        with pytest.raises(DomainError):
            convolution_double_integral(-1.0, -1.0, 3)


class TestPairingResult:
    def test_relative_error(self):
        a = PairingResult(2, 1 + 0j, [0, 0])
        b = PairingResult(2, 1.5 + 0j, [0, 0])
        assert a.relative_error(b) == pytest.approx(1 / 3)
        assert not a.isclose(b)
