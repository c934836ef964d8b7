"""
Utility functions for rendering and parsing expressions, parameters and results.
"""
import logging
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple, Union

import jsonschema
import numpy as np

from cliffordnum import Multivector
from coeffring import ExactScalar, NumericScalar, Scalar
from distcalc import EXACT, NUMERIC, Atom, AtomKind, DistExpr, render_text
from errors import DomainError, ModeError

# Configure logging
logger = logging.getLogger(__name__)

_NUMBER = {"type": "number"}
_INTEGER_TEXT = {"anyOf": [{"type": "integer"}, {"type": "string", "pattern": "^-?[0-9]+$"}]}
_COMPLEX = {
    "type": "object",
    "properties": {"re": _NUMBER, "im": _NUMBER, "pole": {"type": "boolean"}},
    "required": ["re"],
    "additionalProperties": False,
}
_EXACT_COEFF = {
    "type": "object",
    "properties": {"num": _INTEGER_TEXT, "den": _INTEGER_TEXT, "pi_half": {"type": "integer"}},
    "required": ["num"],
    "additionalProperties": False,
}
_COEFF = {"anyOf": [_EXACT_COEFF, _COMPLEX, {"type": "integer"}, {"type": "number"}]}

EXPR_SCHEMA = {
    "type": "object",
    "properties": {
        "dim": {"type": "integer", "minimum": 2},
        "mode": {"enum": [EXACT, NUMERIC]},
        "atoms": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "kind": {"enum": [kind.value for kind in AtomKind]},
                    "degree": {"anyOf": [{"type": "integer"}, _COMPLEX, {"type": "number"}]},
                    "coeff": _COEFF,
                    "p": _COEFF,
                    "q": _COEFF,
                },
                "required": ["kind", "degree"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["atoms"],
}


# Scalars


def render_scalar(value: Scalar) -> Dict[str, Any]:
    """Exact scalars as decimal-string num/den with pi_half; numeric as re/im."""
    if isinstance(value, ExactScalar):
        return {"num": str(value.num), "den": str(value.den), "pi_half": value.pi_half}
    if value.is_pole:
        return {"re": 0.0, "im": 0.0, "pole": True}
    return {"re": value.re, "im": value.im}


def parse_scalar(data: Any, mode: str) -> Scalar:
    if isinstance(data, dict) and "num" in data:
        exact = ExactScalar(Fraction(int(data["num"]), int(data.get("den", 1))), int(data.get("pi_half", 0)))
        return exact if mode == EXACT else exact.to_numeric()
    if isinstance(data, dict):
        if data.get("pole"):
            return NumericScalar.pole()
        value = complex(data["re"], data.get("im", 0.0))
    else:
        value = data
    if mode == EXACT:
        if isinstance(value, int) and not isinstance(value, bool):
            return ExactScalar(Fraction(value))
        raise ModeError(f"Exact expression cannot hold coefficient {data!r}", condition="num/den coefficient in exact mode")
    return NumericScalar.from_complex(complex(value))


def _render_degree(degree) -> Union[int, Dict[str, float]]:
    if isinstance(degree, complex):
        return {"re": degree.real, "im": degree.imag}
    return int(degree)


def _parse_degree(data: Any, mode: str):
    if isinstance(data, dict):
        return complex(data["re"], data.get("im", 0.0))
    if mode == EXACT:
        if isinstance(data, float):
            if not data.is_integer():
                raise ModeError(f"Exact degree must be an integer, got {data}", condition="integer degree in exact mode")
            return int(data)
        return int(data)
    return complex(data)


def _infer_mode(data: Dict[str, Any]) -> str:
    for atom in data.get("atoms", []):
        for key in ("coeff", "p", "q", "degree"):
            value = atom.get(key)
            if isinstance(value, float) or (isinstance(value, dict) and "re" in value):
                return NUMERIC
    return EXACT


# Expressions


def render_expr(e: DistExpr) -> Dict[str, Any]:
    """
    JSON form of an expression.

    Args:
        e: expression

    Returns:
        {"dim", "mode", "atoms": [{"kind", "degree", "coeff"}], "text"}
    """
    return {
        "dim": e.dim,
        "mode": e.mode,
        "atoms": [
            {"kind": atom.kind.value, "degree": _render_degree(atom.degree), "coeff": render_scalar(atom.coeff)}
            for atom in e.atoms
        ],
        "text": render_text(e),
    }


def parse_expr(data: Dict[str, Any], dim: Optional[int] = None, mode: Optional[str] = None) -> DistExpr:
    """
    Build an expression from its JSON form.

    A log atom may carry p and q instead of a single coefficient; it then
    stands for coeff * (p ln r + q) times the atom and expands into a log
    atom and a plain atom of the same degree.

    Args:
        data: decoded JSON object
        dim: dimension when the object has none
        mode: arithmetic mode when the object has none

    Returns:
        DistExpr

    Raises:
        DomainError: schema violation, missing dimension or malformed atom
    """
    payload = {key: value for key, value in data.items() if key != "text"}
    try:
        jsonschema.validate(payload, EXPR_SCHEMA)
    except jsonschema.ValidationError as e:
        raise DomainError(f"Malformed expression: {e.message}", condition="expression JSON schema") from e

    m = payload.get("dim", dim)
    if m is None:
        raise DomainError("Expression has no dimension", condition="dim given in JSON or by --dim")
    if dim is not None and m != dim:
        logger.warning(f"Expression dimension {m} overrides --dim {dim}")
    mode = payload.get("mode") or mode or _infer_mode(payload)

    atoms: List[Atom] = []
    for item in payload["atoms"]:
        kind = AtomKind(item["kind"])
        degree = _parse_degree(item["degree"], mode)
        coeff = parse_scalar(item.get("coeff", 1), mode)
        if "p" in item or "q" in item:
            if not kind.is_log:
                raise DomainError(f"p/q given on a plain {kind.value} atom", condition="p, q only on LogT/LogU atoms")
            p = parse_scalar(item.get("p", 0), mode)
            q = parse_scalar(item.get("q", 0), mode)
            plain = AtomKind.VECTOR_U if kind.is_vector else AtomKind.SCALAR_T
            atoms.append(Atom(kind, degree, coeff * p))
            atoms.append(Atom(plain, degree, coeff * q))
        else:
            atoms.append(Atom(kind, degree, coeff))
    return DistExpr(m, tuple(atoms), mode)


# Parameters


def parse_param(text: str, mode: str = EXACT) -> Union[int, Fraction, complex]:
    """
    Parse an operator parameter: "2", "-3/2", "0.5" or "1+0.5j".

    Args:
        text: parameter text
        mode: exact mode keeps rationals, numeric mode returns complex

    Returns:
        int or Fraction in exact mode, complex in numeric mode
    """
    text = text.strip()
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        try:
            value = complex(text.replace(" ", ""))
        except ValueError as e:
            raise DomainError(f"Cannot parse parameter {text!r}", condition="integer, fraction or complex literal") from e
        if mode == EXACT:
            raise ModeError(f"Parameter {text} needs numeric mode", condition="exact mode needs a rational parameter")
        return value
    if mode == NUMERIC:
        return complex(float(value))
    return int(value) if value.denominator == 1 else value


def parse_range(text: str) -> List[int]:
    """Inclusive integer range "a..b"."""
    try:
        low, high = (int(part) for part in text.split(".."))
    except ValueError as e:
        raise DomainError(f"Bad range {text!r}", condition="range written as a..b") from e
    if low > high:
        raise DomainError(f"Empty range {text!r}", condition="a <= b")
    return list(range(low, high + 1))


def parse_point(text: str) -> Tuple[float, Tuple[float, ...]]:
    """Comma-separated x0,x1,..,xm."""
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError as e:
        raise DomainError(f"Bad point {text!r}", condition="comma-separated reals x0,x1,...,xm") from e
    if len(values) < 2:
        raise DomainError(f"Point {text!r} needs x0 and at least one space coordinate", condition="x0,x1,...,xm")
    return values[0], tuple(values[1:])


# Results


def _complex_dict(z: complex) -> Dict[str, float]:
    return {"re": float(z.real), "im": float(z.imag)}


def pairing_to_dict(result) -> Dict[str, Any]:
    """JSON form of a PairingResult."""
    return {
        "dim": result.dim,
        "scalar_part": _complex_dict(result.scalar_part),
        "vector_part": [_complex_dict(z) for z in np.asarray(result.vector_part)],
        "metadata": result.metadata,
    }


def multivector_to_dict(value: Multivector) -> Dict[str, Any]:
    """Nonzero blades keyed like "e0e2", the scalar blade as "1"."""
    blades = {}
    for blade, coeff in value.terms.items():
        name = "".join(f"e{j}" for j in range(value.dim) if blade >> j & 1) or "1"
        blades[name] = coeff
    return {"dim": value.dim, "blades": blades, "norm": value.norm()}


def format_text(payload: Any, indent: int = 0) -> str:
    """Plain-text rendering of a result dictionary for --output text."""
    pad = "  " * indent
    if isinstance(payload, dict):
        if "text" in payload and "atoms" in payload:
            return f"{pad}{payload['text']}"
        lines = []
        for key, value in payload.items():
            if isinstance(value, (dict, list)):
                lines.append(f"{pad}{key}:")
                lines.append(format_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {value}")
        return "\n".join(lines)
    if isinstance(payload, list):
        return "\n".join(format_text(item, indent) for item in payload)
    return f"{pad}{payload}"
