import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st
from scipy.special import gamma as Gamma

from coeffring import (
    ExactScalar, NumericScalar, gamma_complex, gamma_half, gamma_half_has_pole,
    is_gamma_pole, make_scalar, pi_power, rgamma_complex, sphere_area,
    sphere_area_float,
)
from errors import DivisionByZero, MixedPiPower, PoleError

fractions = st.fractions(max_denominator=50).filter(lambda f: abs(f) < 1000)
pi_halves = st.integers(min_value=-12, max_value=12)


class TestExactScalar:
    @given(fractions, fractions, pi_halves)
    def test_addition_with_equal_pi_power(self, a, b, k):
        assert ExactScalar(a, k) + ExactScalar(b, k) == ExactScalar(a + b, k)

    @given(fractions, fractions, pi_halves, pi_halves)
    def test_multiplication_adds_pi_powers(self, a, b, j, k):
        product = ExactScalar(a, j) * ExactScalar(b, k)
        assert product.value == a * b
        if a * b != 0:
            assert product.pi_half == j + k

    @given(fractions, pi_halves)
    def test_inverse(self, a, k):
        assume(a != 0)
        assert ExactScalar(a, k) * ExactScalar(a, k).invert() == ExactScalar(1)

    def test_zero_drops_pi_power(self):
        assert ExactScalar(0, 5) == ExactScalar(0)
        assert ExactScalar(0, 5).pi_half == 0

    def test_mixed_pi_powers_cannot_be_added(self):
        with pytest.raises(MixedPiPower):
            ExactScalar(1, 1) + ExactScalar(1, 0)

    def test_zero_absorbs_pi_power_mismatch(self):
        assert ExactScalar(0) + ExactScalar(3, 1) == ExactScalar(3, 1)

    def test_invert_zero(self):
        with pytest.raises(DivisionByZero):
            ExactScalar(0).invert()

    def test_from_parts_rejects_zero_denominator(self):
        with pytest.raises(DivisionByZero):
            ExactScalar.from_parts(1, 0)

    def test_float_rejected(self):
        with pytest.raises(TypeError):
            ExactScalar(0.5)

    def test_to_complex(self):
        assert ExactScalar(Fraction(3, 4), 3).to_complex() == pytest.approx(0.75 * math.pi ** 1.5)

    def test_str(self):
        assert str(ExactScalar(Fraction(-1, 2), -3)) == "-1/2*pi^(-3/2)"
        assert str(ExactScalar(7)) == "7"


class TestNumericScalar:
    def test_pole_propagates(self):
        pole = NumericScalar.pole()
        assert (pole + 1).is_pole
        assert (NumericScalar(2.0) * pole).is_pole

    def test_pole_refuses_conversion(self):
        with pytest.raises(PoleError):
            NumericScalar.pole().to_complex()

    def test_dividing_by_pole_gives_zero(self):
        assert (NumericScalar(3.0) / NumericScalar.pole()).is_zero

    def test_isclose_relative(self):
        assert NumericScalar(1e6).isclose(NumericScalar(1e6 + 1e-5), 1e-10)
        assert not NumericScalar(1.0).isclose(NumericScalar(1.001), 1e-6)

    def test_mixes_with_exact(self):
        value = NumericScalar(1.0) + ExactScalar(1, 2)
        assert value.to_complex() == pytest.approx(1 + math.pi)

    def test_make_scalar_numeric_applies_pi_power(self):
        assert make_scalar(2, "numeric", 2).to_complex() == pytest.approx(2 * math.pi)


class TestGamma:
    @pytest.mark.parametrize("n, expected", [
        (1, ExactScalar(1, 1)),
        (2, ExactScalar(1)),
        (3, ExactScalar(Fraction(1, 2), 1)),
        (6, ExactScalar(2)),
        (-1, ExactScalar(-2, 1)),
        (-3, ExactScalar(Fraction(4, 3), 1)),
    ])
    def test_gamma_half_values(self, n, expected):
        assert gamma_half(n) == expected

    @given(st.integers(min_value=-15, max_value=15))
    def test_gamma_half_recurrence(self, n):
        assume(not gamma_half_has_pole(n))
        assert gamma_half(n + 2) == gamma_half(n) * Fraction(n, 2)

    @given(st.integers(min_value=-15, max_value=15))
    def test_gamma_half_matches_scipy(self, n):
        assume(not gamma_half_has_pole(n))
        assert gamma_half(n).to_complex().real == pytest.approx(Gamma(n / 2), rel=1e-12)

    @pytest.mark.parametrize("n", [0, -2, -8])
    def test_gamma_half_pole(self, n):
        assert gamma_half_has_pole(n)
        with pytest.raises(PoleError):
            gamma_half(n)

    def test_pole_detection(self):
        assert is_gamma_pole(-3)
        assert is_gamma_pole(complex(-2, 1e-14))
        assert not is_gamma_pole(0.5)
        assert not is_gamma_pole(1)
        assert gamma_complex(-4).is_pole
        assert rgamma_complex(-4).is_zero

    @given(st.floats(min_value=-4.5, max_value=4.5), st.floats(min_value=-2, max_value=2))
    def test_complex_gamma_recurrence(self, x, y):
        z = complex(x, y)
        assume(abs(y) > 0.05)
        lhs = gamma_complex(z + 1).to_complex()
        rhs = z * gamma_complex(z).to_complex()
        assert lhs == pytest.approx(rhs, rel=1e-9)


class TestSphereArea:
    def test_known_areas(self):
        assert sphere_area(2) == ExactScalar(2, 2)
        assert sphere_area(3) == ExactScalar(4, 2)
        assert sphere_area(4) == ExactScalar(2, 4)

    def test_float(self):
        assert sphere_area_float(3) == pytest.approx(4 * math.pi)

    def test_pi_power(self):
        assert pi_power(-2).to_complex() == pytest.approx(1 / math.pi)
