"""
Catalog of kernel identities and their exact (or numeric) verification.
"""
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple

from config import (
    BOUNDARY_RANGE, CROSS_KERNEL_RANGE, DEFAULT_TOL, DIRAC_RANGE, LAPLACE_RANGE,
    LOG_ORDERS, VERIFY_DIMS,
)
from distcalc import (
    EXACT, DistExpr, approx_equal, convolve, dirac_apply, equal, hilbert,
    laplace_apply, make_delta, make_H,
)
from errors import (
    DomainError, ExcludedParameters, OutOfRange, UndefinedOperator,
    UnsupportedLogAtom,
)
from kernels import (
    BoundaryValueId, OperatorFamily, OperatorId, boundary_value,
    fundamental_solution, kernel, log_kernel,
)
from utils import render_expr

# Configure logging
logger = logging.getLogger(__name__)

DIRAC = OperatorFamily.DIRAC
HILBERT_DIRAC = OperatorFamily.HILBERT_DIRAC
LAPLACE = OperatorFamily.LAPLACE
LAPLACE_HILBERT = OperatorFamily.LAPLACE_HILBERT


class IdentityStatus(Enum):
    HOLDS = "holds"
    FAILS = "fails"
    EXCLUDED = "excluded"


@dataclass
class Comparison:
    """One left/right pair inside an identity."""
    label: str
    lhs: DistExpr
    rhs: DistExpr


@dataclass
class IdentityReport:
    """Outcome of checking one identity instance."""
    name: str
    params: Dict[str, Any]
    dim: int
    status: IdentityStatus
    lhs: Optional[DistExpr] = None
    rhs: Optional[DistExpr] = None
    note: str = ""
    printed_agrees: Optional[bool] = None
    steps: List[Tuple[str, bool]] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.status is IdentityStatus.HOLDS

    def to_dict(self, include_expressions: bool = True) -> Dict[str, Any]:
        """Render the report as a JSON-friendly dictionary."""
        result = {
            "name": self.name,
            "params": {key: _param_text(value) for key, value in self.params.items()},
            "dim": self.dim,
            "status": self.status.value,
            "holds": self.holds,
            "note": self.note,
            "printed_agrees": self.printed_agrees,
            "steps": [{"label": label, "holds": ok} for label, ok in self.steps],
        }
        if include_expressions and self.lhs is not None:
            result["lhs"] = render_expr(self.lhs)
            result["rhs"] = render_expr(self.rhs)
        return result


def _param_text(value) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    return value


def _half_grid(low: int, high: int) -> List[Fraction]:
    return [Fraction(n, 2) for n in range(2 * low, 2 * high + 1)]


class IdentityCatalog:
    """
    Class responsible for building both sides of every catalog identity and
    comparing them.
    """

    def __init__(self, mode: str = EXACT, tol: float = DEFAULT_TOL):
        """Initialize the identity catalog."""
        self.mode = mode
        self.tol = tol
        self._checks: Dict[str, Callable[..., Tuple[List[Comparison], Optional[bool], str]]] = {
            "dirac_semigroup": self._dirac_semigroup,
            "hilbert_dirac_composition": self._hilbert_dirac_composition,
            "dirac_hilbert_mixed": self._dirac_hilbert_mixed,
            "laplace_semigroup": self._laplace_semigroup,
            "laplace_hilbert_composition": self._laplace_hilbert_composition,
            "laplace_mixed": self._laplace_mixed,
            "dirac_inverse": self._inverse(DIRAC),
            "hilbert_dirac_inverse": self._inverse(HILBERT_DIRAC),
            "laplace_inverse": self._inverse(LAPLACE),
            "laplace_hilbert_inverse": self._inverse(LAPLACE_HILBERT),
            "hilbert_pair_dirac": self._hilbert_pair_dirac,
            "hilbert_pair_laplace": self._hilbert_pair_laplace,
            "boundary_dirac_chain": self._boundary_dirac_chain,
            "boundary_hilbert": self._boundary_hilbert,
            "boundary_convolution": self._boundary_convolution,
            "boundary_recurrence": self._boundary_recurrence,
            "boundary_identification": self._boundary_identification,
            "cross_kernel_table": self._cross_kernel_table,
            "log_chain": self._log_chain,
            "integer_powers": self._integer_powers,
            "square_root_factorization": self._square_root_factorization,
        }

    @property
    def names(self) -> List[str]:
        return list(self._checks)

    # Public API

    def check(self, name: str, params: Dict[str, Any], m: int) -> IdentityReport:
        """
        Check one identity instance.

        Args:
            name: catalog name
            params: identity parameters (mu, nu, alpha, beta, k, p, q or n)
            m: dimension

        Returns:
            IdentityReport; excluded when some ingredient is undefined at
            these parameters
        """
        if name not in self._checks:
            raise DomainError(f"Unknown identity {name!r}", condition=f"name in {sorted(self._checks)}")
        try:
            comparisons, printed_agrees, note = self._checks[name](m, **params)
        except (ExcludedParameters, UndefinedOperator, OutOfRange, UnsupportedLogAtom) as e:
            logger.debug(f"{name}{params} excluded in m={m}: {e.condition}")
            return IdentityReport(name, dict(params), m, IdentityStatus.EXCLUDED, note=e.condition or e.message)

        steps = []
        failing = None
        for comparison in comparisons:
            ok = self._same(comparison.lhs, comparison.rhs)
            steps.append((comparison.label, ok))
            if not ok and failing is None:
                failing = comparison
        shown = failing or comparisons[-1]
        status = IdentityStatus.HOLDS if failing is None else IdentityStatus.FAILS
        if failing is not None:
            logger.warning(f"{name}{params} fails in m={m} at step '{failing.label}'")
        return IdentityReport(
            name, dict(params), m, status, shown.lhs, shown.rhs,
            note=note, printed_agrees=printed_agrees, steps=steps,
        )

    def instances(self, name: str, m: int) -> List[Dict[str, Any]]:
        """Default parameter grid for an identity in dimension m."""
        dirac = range(DIRAC_RANGE[0], DIRAC_RANGE[1] + 1)
        laplace = _half_grid(*LAPLACE_RANGE)
        boundary = range(-BOUNDARY_RANGE, BOUNDARY_RANGE + 1)
        logs = range(0, LOG_ORDERS + 1)
        if name in ("dirac_semigroup", "hilbert_dirac_composition", "dirac_hilbert_mixed"):
            return [{"mu": mu, "nu": nu} for mu in dirac for nu in dirac]
        if name in ("laplace_semigroup", "laplace_hilbert_composition", "laplace_mixed"):
            return [{"alpha": a, "beta": b} for a in laplace for b in laplace]
        if name in ("dirac_inverse", "hilbert_dirac_inverse"):
            mus = sorted(set(dirac) | {s * (m + n) for n in logs for s in (1, -1)})
            return [{"mu": mu} for mu in mus]
        if name in ("laplace_inverse", "laplace_hilbert_inverse"):
            betas = sorted(set(laplace) | {Fraction(s * (m + n), 2) for n in logs for s in (1, -1)})
            return [{"beta": beta} for beta in betas]
        if name == "hilbert_pair_dirac":
            return [{"mu": mu} for mu in dirac]
        if name == "hilbert_pair_laplace":
            return [{"beta": beta} for beta in laplace]
        if name in ("boundary_dirac_chain", "boundary_hilbert"):
            return [{"k": k} for k in boundary]
        if name == "boundary_convolution":
            return [{"p": p, "q": q} for p in boundary for q in boundary]
        if name == "boundary_recurrence":
            return [{"k": k} for k in range(1, BOUNDARY_RANGE + 1)]
        if name == "boundary_identification":
            return [{"k": k} for k in range(-BOUNDARY_RANGE // 2, BOUNDARY_RANGE // 2 + 1)]
        if name == "cross_kernel_table":
            return [{"k": k} for k in range(CROSS_KERNEL_RANGE[0], CROSS_KERNEL_RANGE[1] + 1)]
        if name in ("log_chain", "integer_powers"):
            return [{"n": n} for n in logs]
        return [{}]

    def sweep(
        self,
        names: Optional[Iterable[str]] = None,
        dims: Optional[Iterable[int]] = None,
        instances: Optional[List[Dict[str, Any]]] = None,
    ) -> List[IdentityReport]:
        """
        Check every instance of the named identities in every dimension.

        Args:
            names: identities to run, all when omitted
            dims: dimensions, VERIFY_DIMS when omitted
            instances: explicit parameter sets overriding the default grid

        Returns:
            List of reports in (dimension, name, instance) order
        """
        names = list(names) if names else self.names
        dims = list(dims) if dims else VERIFY_DIMS
        reports = []
        started = datetime.now(timezone.utc)
        for m in dims:
            for name in names:
                for params in instances if instances is not None else self.instances(name, m):
                    reports.append(self.check(name, params, m))
        failed = sum(1 for r in reports if r.status is IdentityStatus.FAILS)
        elapsed = (datetime.now(timezone.utc) - started).total_seconds()
        logger.info(f"Checked {len(reports)} identity instances in {elapsed:.2f}s, {failed} failed")
        return reports

    # Helpers

    def _same(self, lhs: DistExpr, rhs: DistExpr) -> bool:
        if self.mode == EXACT and lhs.mode == EXACT and rhs.mode == EXACT:
            return equal(lhs, rhs)
        return approx_equal(lhs, rhs, self.tol)

    def _k(self, family: OperatorFamily, param, m: int) -> DistExpr:
        mode = None if self.mode == EXACT else self.mode
        return kernel(OperatorId(family, param), m, mode)

    def _delta(self, m: int) -> DistExpr:
        return make_delta(m, self.mode)

    # Semigroup and composition laws

    def _dirac_semigroup(self, m, mu, nu):
        lhs = convolve(self._k(DIRAC, mu, m), self._k(DIRAC, nu, m))
        return [Comparison("dirac(mu) * dirac(nu) = dirac(mu + nu)", lhs, self._k(DIRAC, mu + nu, m))], None, ""

    def _hilbert_dirac_composition(self, m, mu, nu):
        lhs = convolve(self._k(HILBERT_DIRAC, mu, m), self._k(HILBERT_DIRAC, nu, m))
        printed = self._k(HILBERT_DIRAC, mu + nu, m)
        rhs = self._k(DIRAC, mu + nu, m)
        note = "two Hilbert-type kernels compose to a delta-type kernel; printed right side is H-type"
        return [Comparison("hilbert_dirac(mu) * hilbert_dirac(nu) = dirac(mu + nu)", lhs, rhs)], self._same(lhs, printed), note

    def _dirac_hilbert_mixed(self, m, mu, nu):
        lhs = convolve(self._k(DIRAC, mu, m), self._k(HILBERT_DIRAC, nu, m))
        return [Comparison("dirac(mu) * hilbert_dirac(nu) = hilbert_dirac(mu + nu)", lhs, self._k(HILBERT_DIRAC, mu + nu, m))], None, ""

    def _laplace_semigroup(self, m, alpha, beta):
        lhs = convolve(self._k(LAPLACE, alpha, m), self._k(LAPLACE, beta, m))
        return [Comparison("laplace(a) * laplace(b) = laplace(a + b)", lhs, self._k(LAPLACE, alpha + beta, m))], None, ""

    def _laplace_hilbert_composition(self, m, alpha, beta):
        lhs = convolve(self._k(LAPLACE_HILBERT, alpha, m), self._k(LAPLACE_HILBERT, beta, m))
        rhs = self._k(LAPLACE, alpha + beta, m)
        return [Comparison("laplace_hilbert(a) * laplace_hilbert(b) = laplace(a + b)", lhs, rhs)], True, ""

    def _laplace_mixed(self, m, alpha, beta):
        lhs = convolve(self._k(LAPLACE, alpha, m), self._k(LAPLACE_HILBERT, beta, m))
        rhs = self._k(LAPLACE_HILBERT, alpha + beta, m)
        return [Comparison("laplace(a) * laplace_hilbert(b) = laplace_hilbert(a + b)", lhs, rhs)], None, ""

    # Inverse laws

    def _inverse(self, family: OperatorFamily):
        key = "beta" if family.is_laplace else "mu"

        def check(m, **params):
            return self._inverse_law(family, params[key], m)

        return check

    def _inverse_law(self, family: OperatorFamily, param, m: int):
        op = OperatorId(family, param)
        operator_kernel = self._k(family, param, m)
        solution = fundamental_solution(op, m, None if self.mode == EXACT else self.mode)
        delta = self._delta(m)
        if not (op.is_extended(m) or op.inverse().is_extended(m)):
            lhs = convolve(operator_kernel, solution)
            return [Comparison("kernel * fundamental solution = delta", lhs, delta)], None, ""

        positive = op if not op.is_extended(m) else op.inverse()
        order = int(positive.order)
        n = order - m
        if family is DIRAC or family is HILBERT_DIRAC:
            base = family
        elif family is LAPLACE:
            base = DIRAC if order % 2 == 0 else HILBERT_DIRAC
        else:
            base = HILBERT_DIRAC if order % 2 == 0 else DIRAC

        log_side = self._k(family, -positive.param, m)
        regular_side = self._k(family, positive.param, m)
        comparisons = [
            Comparison("logarithmic side is the log kernel of index n", log_side, log_kernel(m, n, self.mode)),
            Comparison("regular side as a Dirac-type kernel", regular_side, self._k(base, order, m)),
        ]
        comparisons.extend(self._log_chain_steps(base, n, m))
        return comparisons, None, f"logarithmic case n = {n}, checked through the Dirac chain"

    def _log_chain_steps(self, base: OperatorFamily, n: int, m: int) -> List[Comparison]:
        """
        dirac^{n+1} takes the log kernel of index n to the regular kernel of
        order m - 1, and dirac(n+1) * base(m-1) = base(m+n).
        """
        delta = self._delta(m)
        powered = delta
        log_expr = log_kernel(m, n, self.mode)
        for _ in range(n + 1):
            powered = dirac_apply(powered)
            log_expr = dirac_apply(log_expr)
        step_kernel = self._k(DIRAC, n + 1, m)
        return [
            Comparison("dirac applied n+1 times to delta = dirac(n+1)", powered, step_kernel),
            Comparison("dirac(n+1) * base(m-1) = base(m+n)",
                       convolve(step_kernel, self._k(base, m - 1, m)), self._k(base, m + n, m)),
            Comparison("dirac^{n+1} of the log kernel = base(1-m)", log_expr, self._k(base, 1 - m, m)),
            Comparison("base(m-1) * base(1-m) = delta",
                       convolve(self._k(base, m - 1, m), self._k(base, 1 - m, m)), delta),
        ]

    # Hilbert pairs

    def _hilbert_pair_dirac(self, m, mu):
        e_mu = self._k(DIRAC, -mu, m)
        f_mu = self._k(HILBERT_DIRAC, -mu, m)
        return [Comparison("H * E_mu = F_mu", hilbert(e_mu), f_mu)], None, ""

    def _hilbert_pair_laplace(self, m, beta):
        k_beta = self._k(LAPLACE, -beta, m)
        l_beta = self._k(LAPLACE_HILBERT, -beta, m)
        return [Comparison("H * K_beta = L_beta", hilbert(k_beta), l_beta)], None, ""

    # Boundary values

    def _bv(self, side: str, k: int, m: int) -> DistExpr:
        expr = boundary_value(BoundaryValueId(side, k), m)
        return expr if self.mode == EXACT else expr.to_numeric()

    def _boundary_dirac_chain(self, m, k):
        comparisons = []
        if BoundaryValueId("a", k).is_valid(m):
            comparisons.append(Comparison("-dirac a_k = b_{k-1}", -dirac_apply(self._bv("a", k, m)), self._bv("b", k - 1, m)))
        if BoundaryValueId("b", k).is_valid(m):
            comparisons.append(Comparison("-dirac b_k = a_{k-1}", -dirac_apply(self._bv("b", k, m)), self._bv("a", k - 1, m)))
        if not comparisons:
            raise OutOfRange(f"Neither a_{k} nor b_{k} exists in dimension {m}", condition=f"k <= {m - 1}")
        return comparisons, None, ""

    def _boundary_hilbert(self, m, k):
        a_k, b_k = self._bv("a", k, m), self._bv("b", k, m)
        return [
            Comparison("H * a_k = b_k", hilbert(a_k), b_k),
            Comparison("H * b_k = a_k", hilbert(b_k), a_k),
        ], None, ""

    def _boundary_convolution(self, m, p, q):
        a_p, a_q = self._bv("a", p, m), self._bv("a", q, m)
        b_p, b_q = self._bv("b", p, m), self._bv("b", q, m)
        r = p + q + 1
        return [
            Comparison("a_p * a_q = a_{p+q+1}", convolve(a_p, a_q), self._bv("a", r, m)),
            Comparison("a_p * b_q = b_{p+q+1}", convolve(a_p, b_q), self._bv("b", r, m)),
            Comparison("b_p * a_q = b_{p+q+1}", convolve(b_p, a_q), self._bv("b", r, m)),
            Comparison("b_p * b_q = a_{p+q+1}", convolve(b_p, b_q), self._bv("a", r, m)),
        ], None, ""

    def _boundary_recurrence(self, m, k):
        a_0, b_0 = self._bv("a", 0, m), self._bv("b", 0, m)
        a_prev, b_prev = self._bv("a", k - 1, m), self._bv("b", k - 1, m)
        a_k, b_k = self._bv("a", k, m), self._bv("b", k, m)
        return [
            Comparison("a_k = a_0 * a_{k-1}", a_k, convolve(a_0, a_prev)),
            Comparison("a_k = b_0 * b_{k-1}", a_k, convolve(b_0, b_prev)),
            Comparison("b_k = a_0 * b_{k-1}", b_k, convolve(a_0, b_prev)),
            Comparison("b_k = b_0 * a_{k-1}", b_k, convolve(b_0, a_prev)),
        ], None, ""

    def _boundary_identification(self, m, k):
        comparisons = []
        half = Fraction(1, 2)
        if BoundaryValueId("a", 2 * k - 1).is_valid(m):
            a_odd = self._bv("a", 2 * k - 1, m)
            comparisons.append(Comparison("a_{2k-1} = E_{2k}", a_odd, self._k(DIRAC, -2 * k, m)))
            comparisons.append(Comparison("a_{2k-1} = K_k", a_odd, self._k(LAPLACE, -k, m)))
        if BoundaryValueId("a", 2 * k).is_valid(m):
            a_even = self._bv("a", 2 * k, m)
            comparisons.append(Comparison("a_{2k} = -F_{2k+1}", a_even, -self._k(HILBERT_DIRAC, -2 * k - 1, m)))
            comparisons.append(Comparison("a_{2k} = -K_{k+1/2}", a_even, -self._k(LAPLACE, -k - half, m)))
        if BoundaryValueId("b", 2 * k - 1).is_valid(m):
            b_odd = self._bv("b", 2 * k - 1, m)
            comparisons.append(Comparison("b_{2k-1} = F_{2k}", b_odd, self._k(HILBERT_DIRAC, -2 * k, m)))
            comparisons.append(Comparison("b_{2k-1} = L_k", b_odd, self._k(LAPLACE_HILBERT, -k, m)))
        if BoundaryValueId("b", 2 * k).is_valid(m):
            b_even = self._bv("b", 2 * k, m)
            comparisons.append(Comparison("b_{2k} = -E_{2k+1}", b_even, -self._k(DIRAC, -2 * k - 1, m)))
            comparisons.append(Comparison("b_{2k} = -L_{k+1/2}", b_even, -self._k(LAPLACE_HILBERT, -k - half, m)))
        if not comparisons:
            raise OutOfRange(f"No boundary value of index 2k-1 or 2k exists for k = {k}", condition=f"2k - 1 <= {m - 1}")
        return comparisons, None, ""

    # Cross-family table and chains

    def _cross_kernel_table(self, m, k):
        half = Fraction(1, 2)
        return [
            Comparison("laplace(k) = dirac(2k)", self._k(LAPLACE, k, m), self._k(DIRAC, 2 * k, m)),
            Comparison("laplace(k+1/2) = hilbert_dirac(2k+1)", self._k(LAPLACE, k + half, m), self._k(HILBERT_DIRAC, 2 * k + 1, m)),
            Comparison("laplace_hilbert(k) = hilbert_dirac(2k)", self._k(LAPLACE_HILBERT, k, m), self._k(HILBERT_DIRAC, 2 * k, m)),
            Comparison("laplace_hilbert(k+1/2) = dirac(2k+1)", self._k(LAPLACE_HILBERT, k + half, m), self._k(DIRAC, 2 * k + 1, m)),
        ], None, ""

    def _log_chain(self, m, n):
        lowered = dirac_apply(log_kernel(m, n, self.mode))
        if n == 0:
            base = DIRAC if m % 2 == 0 else HILBERT_DIRAC
            return [Comparison("dirac of the index-0 log kernel = regular kernel of order m - 1", lowered, self._k(base, 1 - m, m))], None, ""
        return [Comparison("dirac of log kernel n = log kernel n - 1", lowered, log_kernel(m, n - 1, self.mode))], None, ""

    def _integer_powers(self, m, n):
        powered = self._delta(m)
        for _ in range(n):
            powered = dirac_apply(powered)
        comparisons = [Comparison("dirac applied n times to delta = dirac(n)", powered, self._k(DIRAC, n, m))]
        laplacian = self._delta(m)
        for _ in range(n):
            laplacian = -laplace_apply(laplacian)
        comparisons.append(Comparison("(-laplace) applied n times to delta = laplace(n)", laplacian, self._k(LAPLACE, n, m)))
        return comparisons, None, ""

    def _square_root_factorization(self, m):
        half = Fraction(1, 2)
        delta, H = self._delta(m), make_H(m, self.mode)
        root_delta = self._k(LAPLACE, half, m)
        root_h = self._k(LAPLACE_HILBERT, half, m)
        hilbert_from_root = convolve(root_delta, self._k(DIRAC, -1, m))
        comparisons = [
            Comparison("dirac H = (-laplace)^(1/2) delta", dirac_apply(H), root_delta),
            Comparison("dirac delta = (-laplace)^(1/2) H", dirac_apply(delta), root_h),
            Comparison("(-laplace)^(1/2) delta squared = -laplace delta", convolve(root_delta, root_delta), -laplace_apply(delta)),
            Comparison("(-laplace)^(1/2) delta * E_1 = H", hilbert_from_root, H),
        ]
        note = "the printed H = (-laplace)^(1/2) delta holds only after composing with E_1"
        return comparisons, self._same(H, root_delta), note


def identity_check(name: str, params: Dict[str, Any], m: int, mode: str = EXACT, tol: float = DEFAULT_TOL) -> IdentityReport:
    """Check one catalog identity; see IdentityCatalog.check."""
    return IdentityCatalog(mode, tol).check(name, params, m)
