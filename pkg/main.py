"""
Command-line entry point for the hyperpotential calculus and its verification suites.
"""
import argparse
import itertools
import json
import logging
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence

from analytics import VerificationAnalytics
from config import DEFAULT_TOL, LOG_LEVEL, MODES, OUTPUT_FORMATS, POTENTIAL_STEP, VERIFY_DIMS
from distcalc import EXACT, DistExpr, convolve, dirac_apply, hilbert, laplace_apply, r2_multiply, vector_multiply
from errors import DomainError, HyperpotentialError, VerificationFailure
from halfspace import (
    HalfSpacePoint, PotentialFamily, PotentialId, boundary_limit_test, conjugate_residual,
    evaluate, monogenicity_residual, poisson_mass,
)
from identities import IdentityCatalog, IdentityStatus
from kernels import BoundaryValueId, OperatorFamily, OperatorId, boundary_value, fundamental_solution, kernel
from oracle import (
    TestFunction, TestFunctionKind, convolution_double_integral, delta_derivative, pair_gaussian,
    pair_quadrature,
)
from utils import (
    format_text, multivector_to_dict, pairing_to_dict, parse_expr, parse_param, parse_point,
    parse_range, render_expr,
)

# Configure logging
logger = logging.getLogger(__name__)

DEFAULT_DIM = 3

RANGE_KEYS = ("mu", "nu", "alpha", "beta", "k", "p", "q", "n")

# Values of these flags may begin with "-" (ranges, fractions, coordinate lists)
DASHED_VALUE_FLAGS = frozenset(
    ["--mu", "--beta", "--degrees", "--point"] + [f"--{key}-range" for key in RANGE_KEYS]
)

OPERATORS: Dict[str, Callable[[DistExpr], DistExpr]] = {
    "dirac": dirac_apply,
    "laplace": laplace_apply,
    "hilbert": hilbert,
    "xmul": vector_multiply,
    "r2mul": r2_multiply,
}


@dataclass
class Config:
    """Global options shared by every command."""
    dim: int = DEFAULT_DIM
    mode: str = EXACT
    tol: float = DEFAULT_TOL
    output: str = "json"

    def __post_init__(self):
        if self.dim < 2:
            raise DomainError(f"Dimension m = {self.dim} too small", condition="m >= 2")
        if not self.tol > 0:
            raise DomainError(f"Tolerance {self.tol} must be positive", condition="tol > 0")
        if self.mode not in MODES:
            raise DomainError(f"Unknown mode {self.mode!r}", condition=f"mode in {MODES}")
        if self.output not in OUTPUT_FORMATS:
            raise DomainError(f"Unknown output format {self.output!r}", condition=f"output in {OUTPUT_FORMATS}")


# Argument helpers


def _load_json(text: str) -> Dict[str, Any]:
    """Inline JSON or @path to a JSON file."""
    try:
        if text.startswith("@"):
            with open(text[1:], "r", encoding="utf-8") as f:
                return json.load(f)
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as e:
        raise DomainError(f"Cannot read expression {text!r}: {e}", condition="well-formed JSON") from e


def _operator(args, config: Config) -> OperatorId:
    family = OperatorFamily(args.family)
    raw = args.beta if family.is_laplace else args.mu
    if raw is None:
        raw = args.mu if args.mu is not None else args.beta
    if raw is None:
        flag = "--beta" if family.is_laplace else "--mu"
        raise DomainError(f"{family.value} needs {flag}", condition=f"{flag} given")
    return OperatorId(family, parse_param(raw, config.mode))


def _test_function(args) -> TestFunction:
    kind = TestFunctionKind(args.test)
    if kind is TestFunctionKind.GAUSSIAN_MOMENT:
        return TestFunction.moment(args.index or 1, args.power)
    if kind is TestFunctionKind.POLY_GAUSSIAN:
        return TestFunction.poly_gaussian(args.power)
    if kind is TestFunctionKind.GAUSSIAN:
        return TestFunction.gaussian()
    raise DomainError("Custom test functions are not available from the command line", condition="built-in test function")


def _half_range(text: str) -> List[Fraction]:
    low, high = parse_range(text)[0], parse_range(text)[-1]
    return [Fraction(n, 2) for n in range(2 * low, 2 * high + 1)]


# Commands


def cmd_kernel(args, config: Config) -> Dict[str, Any]:
    op = _operator(args, config)
    expr = kernel(op, config.dim, config.mode)
    return {"operator": str(op), "extended": op.is_extended(config.dim), "kernel": render_expr(expr)}


def cmd_fundamental(args, config: Config) -> Dict[str, Any]:
    op = _operator(args, config)
    expr = fundamental_solution(op, config.dim, config.mode)
    return {"operator": str(op), "extended": op.inverse().is_extended(config.dim), "fundamental_solution": render_expr(expr)}


def cmd_boundary(args, config: Config) -> Dict[str, Any]:
    bid = BoundaryValueId(args.side, args.k)
    expr = boundary_value(bid, config.dim)
    if config.mode != EXACT:
        expr = expr.to_numeric()
    return {"boundary_value": str(bid), "value": render_expr(expr)}


def cmd_apply(args, config: Config) -> Dict[str, Any]:
    expr = parse_expr(_load_json(args.expr), config.dim, config.mode)
    result = OPERATORS[args.op](expr)
    return {"operator": args.op, "result": render_expr(result)}


def cmd_convolve(args, config: Config) -> Dict[str, Any]:
    left = parse_expr(_load_json(args.left), config.dim, config.mode)
    right = parse_expr(_load_json(args.right), config.dim, config.mode)
    return {"result": render_expr(convolve(left, right))}


def _instances(catalog: IdentityCatalog, name: str, m: int, args) -> List[Dict[str, Any]]:
    """Default grid for the identity, with any parameter ranges given on the command line."""
    defaults = catalog.instances(name, m)
    keys = list(defaults[0]) if defaults else []
    overrides = {
        "mu": args.mu_range and parse_range(args.mu_range),
        "nu": args.nu_range and parse_range(args.nu_range),
        "alpha": args.alpha_range and _half_range(args.alpha_range),
        "beta": args.beta_range and _half_range(args.beta_range),
        "k": args.k_range and parse_range(args.k_range),
        "p": args.p_range and parse_range(args.p_range),
        "q": args.q_range and parse_range(args.q_range),
        "n": args.n_range and parse_range(args.n_range),
    }
    if not any(overrides.get(key) for key in keys):
        return defaults
    if catalog.mode != EXACT:
        overrides = {key: values and [complex(v) for v in values] for key, values in overrides.items()}
    axes = []
    for key in keys:
        values = overrides.get(key) or sorted({instance[key] for instance in defaults}, key=lambda v: complex(v).real)
        axes.append(values)
    return [dict(zip(keys, combo)) for combo in itertools.product(*axes)]


def cmd_verify(args, config: Config) -> Dict[str, Any]:
    catalog = IdentityCatalog(config.mode, config.tol)
    names = catalog.names if args.name == "all" else [args.name]
    if args.name != "all" and args.name not in catalog.names:
        raise DomainError(f"Unknown identity {args.name!r}", condition=f"name in {catalog.names} or all")
    dims = [config.dim] if args.dim is not None else VERIFY_DIMS
    reports = []
    for m in dims:
        for name in names:
            for params in _instances(catalog, name, m, args):
                reports.append(catalog.check(name, params, m))
    analytics = VerificationAnalytics(reports)
    summary = analytics.summary()
    shown = reports if args.verbose else [r for r in reports if r.status is IdentityStatus.FAILS]
    disagreements = analytics.disagreements()
    return {
        "summary": summary,
        "printed_disagreements": {name: int(n) for name, n in disagreements.groupby("name").size().items()},
        "reports": [r.to_dict() for r in shown],
    }


def cmd_pair(args, config: Config) -> Dict[str, Any]:
    if args.method == "double-integral":
        if not args.degrees:
            raise DomainError("double-integral needs --degrees alpha,beta", condition="--degrees given")
        alpha, beta = (float(part) for part in args.degrees.split(","))
        return {"pairing": pairing_to_dict(convolution_double_integral(alpha, beta, config.dim))}
    phi = _test_function(args)
    if args.method == "delta":
        if args.degree is None:
            raise DomainError("delta pairing needs --degree", condition="--degree on the delta grid")
        return {"pairing": pairing_to_dict(delta_derivative(config.dim, args.degree, phi, args.step))}
    if args.expr is None:
        raise DomainError(f"{args.method} pairing needs --expr", condition="--expr given")
    expr = parse_expr(_load_json(args.expr), config.dim, config.mode)
    if args.method == "gaussian":
        result = pair_gaussian(expr, phi)
    else:
        result = pair_quadrature(expr, phi, args.subtraction_order)
    return {"pairing": pairing_to_dict(result)}


def cmd_potential(args, config: Config) -> Dict[str, Any]:
    family = PotentialFamily(args.family)
    pid = PotentialId(family, args.k)
    payload: Dict[str, Any] = {"potential": str(pid)}
    if args.boundary_limit:
        payload["boundary_limit"] = boundary_limit_test(pid, config.dim, tol=args.limit_tol)
        return payload
    if args.poisson_mass is not None:
        payload["poisson_mass"] = poisson_mass(config.dim, args.poisson_mass)
        return payload
    if args.point is None:
        raise DomainError("potential needs --point, --boundary-limit or --poisson-mass", condition="--point x0,x1,...,xm")
    x0, x_vec = parse_point(args.point)
    point = HalfSpacePoint(x0, x_vec)
    payload["point"] = {"x0": point.x0, "x": list(point.x_vec)}
    payload["value"] = multivector_to_dict(evaluate(pid, point))
    if family is PotentialFamily.C:
        payload["monogenicity_residual"] = monogenicity_residual(pid, point, args.step)
        if pid.k - 1 >= PotentialId.MIN_INDEX:
            payload["conjugate_residual"] = conjugate_residual(pid.k, point, args.step)
    return payload


COMMANDS = {
    "kernel": cmd_kernel,
    "fundamental": cmd_fundamental,
    "boundary": cmd_boundary,
    "apply": cmd_apply,
    "convolve": cmd_convolve,
    "verify": cmd_verify,
    "pair": cmd_pair,
    "potential": cmd_potential,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim", type=int, default=None, help=f"dimension m (default {DEFAULT_DIM})")
    common.add_argument("--mode", choices=MODES, default=EXACT)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--output", choices=OUTPUT_FORMATS, default="json")
    common.add_argument("--log-level", default=LOG_LEVEL)

    parser = argparse.ArgumentParser(prog="hyperpotential", description="Clifford distribution kernels and their identities")
    sub = parser.add_subparsers(dest="command", required=True)
    families = [family.value for family in OperatorFamily]

    for name in ("kernel", "fundamental"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--family", choices=families, required=True)
        p.add_argument("--mu")
        p.add_argument("--beta")

    p = sub.add_parser("boundary", parents=[common])
    p.add_argument("--side", choices=["a", "b"], required=True)
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("apply", parents=[common])
    p.add_argument("--op", choices=sorted(OPERATORS), required=True)
    p.add_argument("--expr", required=True, help="expression JSON or @file")

    p = sub.add_parser("convolve", parents=[common])
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)

    p = sub.add_parser("verify", parents=[common])
    p.add_argument("--name", default="all")
    for key in RANGE_KEYS:
        p.add_argument(f"--{key}-range", dest=f"{key}_range", help="inclusive range a..b")
    p.add_argument("--verbose", action="store_true", help="include every report with its expressions")

    p = sub.add_parser("pair", parents=[common])
    p.add_argument("--method", choices=["gaussian", "quadrature", "delta", "double-integral"], default="gaussian")
    p.add_argument("--expr")
    p.add_argument("--test", choices=[kind.value for kind in TestFunctionKind if kind is not TestFunctionKind.CUSTOM], default="gaussian")
    p.add_argument("--power", type=int, default=0)
    p.add_argument("--index", type=int)
    p.add_argument("--subtraction-order", type=int)
    p.add_argument("--degree", type=int, help="delta-grid degree for --method delta")
    p.add_argument("--degrees", help="alpha,beta for --method double-integral")
    p.add_argument("--step", type=float)

    p = sub.add_parser("potential", parents=[common])
    p.add_argument("--family", choices=[family.value for family in PotentialFamily], required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--point", help="x0,x1,...,xm")
    p.add_argument("--step", type=float, default=POTENTIAL_STEP)
    p.add_argument("--boundary-limit", action="store_true")
    p.add_argument("--limit-tol", type=float, default=1e-4)
    p.add_argument("--poisson-mass", type=float, metavar="X0")
    return parser


def _attach_values(argv: Sequence[str]) -> List[str]:
    """Rewrite "--flag value" as "--flag=value" so argparse accepts values such as -3..3 or -1/2."""
    joined: List[str] = []
    tokens = iter(argv)
    for token in tokens:
        if token in DASHED_VALUE_FLAGS:
            value = next(tokens, None)
            joined.append(token if value is None else f"{token}={value}")
        else:
            joined.append(token)
    return joined


def _emit(payload: Dict[str, Any], output: str):
    if output == "text":
        print(format_text(payload))
    else:
        print(json.dumps(payload, indent=2, default=str))


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one command.

    Args:
        argv: arguments without the program name, sys.argv[1:] by default

    Returns:
        0 on success, 2 on a domain error, 3 when an identity fails
    """
    argv = sys.argv[1:] if argv is None else argv
    args = build_parser().parse_args(_attach_values(argv))
    logging.basicConfig(
        level=args.log_level.upper(),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )
    output = args.output
    try:
        point_dim = None
        if args.command == "potential" and args.point:
            point_dim = len(parse_point(args.point)[1])
        dim = args.dim if args.dim is not None else (point_dim or DEFAULT_DIM)
        config = Config(dim=dim, mode=args.mode, tol=args.tol, output=output)
        payload = COMMANDS[args.command](args, config)
    except HyperpotentialError as e:
        logger.error(f"{args.command} failed: {e.message}")
        _emit(e.to_dict(), output)
        return e.exit_code

    payload["generated_at"] = datetime.now(timezone.utc).isoformat()
    _emit(payload, output)
    if args.command == "verify" and not payload["summary"]["all_hold"]:
        logger.error(f"{payload['summary']['totals']['fails']} identity instances failed")
        return VerificationFailure.exit_code
    return 0


if __name__ == '__main__':
    sys.exit(main())
