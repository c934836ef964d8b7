import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from errors import DimensionTooSmall, DomainError, OutOfRange, StepTooLarge
from halfspace import (
    F_m_profile, HalfSpacePoint, PotentialFamily, PotentialId,
    boundary_limit_test, boundary_pairing, conjugate_residual, evaluate,
    monogenicity_residual, poisson_mass, scalar_potential,
)

C = PotentialFamily.C


@pytest.fixture
def point4():
    return HalfSpacePoint(0.7, (0.3, -0.4, 0.2, 0.5))


class TestProfile:
    def test_limits(self):
        assert F_m_profile(3, math.inf) == pytest.approx(math.pi / 4)
        assert F_m_profile(1, math.inf) == pytest.approx(math.pi / 2)
        assert F_m_profile(4, 0.0) == 0.0

    @given(st.floats(min_value=1e-3, max_value=50))
    def test_closed_forms_in_low_dimension(self, v):
        assert F_m_profile(1, v) == pytest.approx(math.atan(v), rel=1e-10)
        assert F_m_profile(2, v) == pytest.approx(1 - 1 / math.sqrt(1 + v * v), rel=1e-9)

    @settings(deadline=None)
    @given(st.integers(min_value=1, max_value=8), st.floats(min_value=1e-3, max_value=200))
    def test_beta_matches_quadrature(self, m, v):
        assert F_m_profile(m, v, method="beta") == pytest.approx(F_m_profile(m, v), rel=1e-9)

    def test_domain(self):
        with pytest.raises(DomainError):
            F_m_profile(3, -1.0)
        with pytest.raises(DimensionTooSmall):
            F_m_profile(0, 1.0)


class TestPoints:
    def test_lower_half_space_rejected(self):
        with pytest.raises(DomainError):
            HalfSpacePoint(0.0, (1.0, 2.0))

    def test_geometry(self):
        p = HalfSpacePoint(3.0, (4.0, 0.0))
        assert p.m == 2
        assert p.rho == 4.0
        assert p.norm == 5.0
        assert p.shifted(2, 0.5).x_vec == (4.0, 0.5)

    def test_index_range(self):
        with pytest.raises(OutOfRange):
            PotentialId(C, 3)
        with pytest.raises(OutOfRange):
            PotentialId(C, -4)


class TestEvaluate:
    def test_vector_potential_is_radial(self, point4):
        b = evaluate(PotentialId(PotentialFamily.B, 0), point4)
        ratio = b.vector_part() / np.array(point4.x_vec)
        assert np.allclose(ratio, ratio[0])
        assert b.scalar_part == 0

    def test_C_halves_A(self, point4):
        a = evaluate(PotentialId(PotentialFamily.A, 1), point4)
        c = evaluate(PotentialId(C, 1), point4)
        assert c.scalar_part == pytest.approx(0.5 * a.scalar_part)
        assert all(bin(blade).count("1") in (0, 2) for blade in c.terms)

    def test_dimension_requirements(self):
        p = HalfSpacePoint(0.5, (0.1, 0.2))
        with pytest.raises(DimensionTooSmall):
            evaluate(PotentialId(PotentialFamily.A, 1), p)
        with pytest.raises(DimensionTooSmall):
            evaluate(PotentialId(PotentialFamily.B, 2), p)

    def test_profile_is_continuous_at_the_axis(self):
        on_axis = scalar_potential(1, 4, 0.8, 1e-9)
        near_axis = scalar_potential(1, 4, 0.8, 2e-4)
        assert on_axis == pytest.approx(near_axis, rel=1e-6)

    def test_poisson_kernel_value(self):
        # A_{-1} = 2 x0 / (sigma_{m+1} |x|^{m+1}); sigma_3 = 4 pi
        assert scalar_potential(-1, 2, 1.0, 0.0) == pytest.approx(1 / (2 * math.pi))


class TestMonogenicity:
    @pytest.mark.parametrize("k", range(-3, 3))
    def test_C_is_monogenic(self, point4, k):
        assert monogenicity_residual(PotentialId(C, k), point4) < 1e-6

    @pytest.mark.parametrize("k", range(-2, 3))
    def test_conjugate_operator_lowers_the_index(self, point4, k):
        assert conjugate_residual(k, point4) < 1e-6

    def test_three_dimensional_potentials(self):
        p = HalfSpacePoint(1.3, (0.4, 0.9, -0.2))
        for k in range(-3, 2):
            assert monogenicity_residual(PotentialId(C, k), p) < 1e-6

    def test_extrapolation_improves_the_residual(self, point4):
        pid = PotentialId(C, 0)
        plain = monogenicity_residual(pid, point4, h=1e-2, extrapolate=False)
        assert monogenicity_residual(pid, point4, h=1e-2) < plain

    def test_only_C_is_checked(self, point4):
        with pytest.raises(DomainError):
            monogenicity_residual(PotentialId(PotentialFamily.A, 0), point4)

    def test_step_too_large(self):
        p = HalfSpacePoint(0.01, (0.5, 0.5, 0.5))
        with pytest.raises(StepTooLarge):
            monogenicity_residual(PotentialId(C, -1), p, h=0.005)


class TestBoundary:
    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    @pytest.mark.parametrize("x0", [0.05, 1.0, 4.0])
    def test_poisson_mass(self, m, x0):
        assert poisson_mass(m, x0) == pytest.approx(1.0, rel=1e-8)

    def test_boundary_pairing_rejects_C(self):
        with pytest.raises(DomainError):
            boundary_pairing(PotentialId(C, 0), 3, 0.5)

    def test_poisson_limit(self):
        report = boundary_limit_test(PotentialId(PotentialFamily.A, -1), 3)
        assert report["target"] == pytest.approx(1.0)
        assert report["converged"]
        assert 0.7 < report["fitted_order"] < 1.3
        assert math.isnan(report["local_orders"][0])
        assert len(report["local_orders"]) == len(report["x0"])

    @pytest.mark.slow
    @pytest.mark.parametrize("m", [3, 5])
    @pytest.mark.parametrize("k", [-1, 0, 1])
    @pytest.mark.parametrize("family", [PotentialFamily.A, PotentialFamily.B])
    def test_limits_match_boundary_values(self, family, k, m):
        report = boundary_limit_test(PotentialId(family, k), m)
        assert report["converged"], report

    def test_heights_must_decrease(self):
        with pytest.raises(DomainError):
            boundary_limit_test(PotentialId(PotentialFamily.A, -1), 3, x0_seq=[0.1, 0.2])

    def test_limit_of_C_rejected(self):
        with pytest.raises(DomainError):
            boundary_limit_test(PotentialId(C, -1), 3)
