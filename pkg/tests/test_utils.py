from fractions import Fraction

import pytest

from cliffordnum import Multivector
from coeffring import ExactScalar, NumericScalar
from distcalc import EXACT, NUMERIC, AtomKind, equal, make_delta, make_H
from errors import DomainError, ModeError
from utils import (
    format_text, multivector_to_dict, parse_expr, parse_param, parse_point,
    parse_range, parse_scalar, render_expr, render_scalar,
)


class TestScalars:
    def test_exact_rendering_uses_strings(self):
        value = ExactScalar(Fraction(-3, 2 ** 70), 5)
        data = render_scalar(value)
        assert data == {"num": "-3", "den": str(2 ** 70), "pi_half": 5}
        assert parse_scalar(data, EXACT) == value

    def test_numeric_pole(self):
        assert render_scalar(NumericScalar.pole())["pole"] is True
        assert parse_scalar({"re": 0.0, "pole": True}, NUMERIC).is_pole

    def test_float_in_exact_mode(self):
        with pytest.raises(ModeError):
            parse_scalar(0.5, EXACT)


class TestExpressions:
    def test_rendered_delta_parses_back(self):
        data = render_expr(make_delta(4))
        assert data["text"] == "1*pi^(-2) T*[-4]"
        assert equal(parse_expr(data), make_delta(4))

    def test_dimension_from_flag(self):
        e = parse_expr({"atoms": [{"kind": "U", "degree": -3, "coeff": 2}]}, dim=3)
        assert e.dim == 3
        assert e.coefficient(AtomKind.VECTOR_U, -3) == ExactScalar(2)

    def test_missing_dimension(self):
        with pytest.raises(DomainError):
            parse_expr({"atoms": []})

    def test_schema_violation(self):
        with pytest.raises(DomainError):
            parse_expr({"dim": 3, "atoms": [{"kind": "W", "degree": 0}]})

    def test_float_coefficient_switches_to_numeric(self):
        e = parse_expr({"dim": 3, "atoms": [{"kind": "T", "degree": -1, "coeff": 0.5}]})
        assert e.mode == NUMERIC

    def test_log_atom_with_p_and_q(self):
        data = {"dim": 3, "atoms": [{"kind": "LogT", "degree": 2, "p": 3, "q": {"num": "1", "den": "2"}}]}
        e = parse_expr(data)
        assert e.coefficient(AtomKind.LOG_T, 2) == ExactScalar(3)
        assert e.coefficient(AtomKind.SCALAR_T, 2) == ExactScalar(Fraction(1, 2))

    def test_p_on_plain_atom(self):
        with pytest.raises(DomainError):
            parse_expr({"dim": 3, "atoms": [{"kind": "T", "degree": 2, "p": 1}]})

    def test_complex_degree(self):
        e = parse_expr({"dim": 3, "atoms": [{"kind": "T", "degree": {"re": -1.5, "im": 0.5}, "coeff": {"re": 1.0}}]})
        assert e.atoms[0].degree == complex(-1.5, 0.5)

    def test_rendered_numeric_hilbert_kernel(self):
        data = render_expr(make_H(3, NUMERIC))
        assert data["mode"] == NUMERIC
        assert set(data["atoms"][0]["coeff"]) == {"re", "im"}


class TestParameters:
    @pytest.mark.parametrize("text, expected", [
        ("2", 2), ("-3/2", Fraction(-3, 2)), ("0.5", Fraction(1, 2)), (" 4 ", 4),
    ])
    def test_exact(self, text, expected):
        assert parse_param(text) == expected

    def test_numeric(self):
        assert parse_param("1+0.5j", NUMERIC) == complex(1, 0.5)
        assert parse_param("3/4", NUMERIC) == complex(0.75)

    def test_complex_needs_numeric_mode(self):
        with pytest.raises(ModeError):
            parse_param("1+2j")

    def test_garbage(self):
        with pytest.raises(DomainError):
            parse_param("mu")

    def test_range(self):
        assert parse_range("-2..1") == [-2, -1, 0, 1]
        with pytest.raises(DomainError):
            parse_range("3..1")
        with pytest.raises(DomainError):
            parse_range("1-3")

    def test_point(self):
        assert parse_point("0.5,1,2") == (0.5, (1.0, 2.0))
        with pytest.raises(DomainError):
            parse_point("0.5")


class TestResults:
    def test_multivector_blades(self):
        value = Multivector.from_terms(3, {0: 1.5, 0b101: -2.0})
        data = multivector_to_dict(value)
        assert data["blades"] == {"1": 1.5, "e0e2": -2.0}

    def test_format_text_uses_expression_text(self):
        text = format_text({"kernel": render_expr(make_delta(3)), "extended": False})
        assert "T*[-3]" in text
        assert "extended: False" in text
