"""Throughput-optimal link design.

The unconstrained optimum has a closed form: the SIR threshold depends on
the path-loss exponent only,

    beta* = exp(W0(-(a/2) exp(-a/2)) + a/2) - 1,

and the hop length is ``d* = 1 / (D lambda kappa pi beta*^(2/a))``. The
optimal throughput is the throughput function evaluated at that point.

Secrecy-constrained designs come in two flavours, see :class:`Mode`.
Derivative-free maximizers (golden section, bounded Nelder-Mead) provide
an independent numeric route to the same optima.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Callable, NamedTuple, Sequence

from .model import (
    EavesdropperParams,
    LinkDesign,
    SecrecySpec,
    SystemParams,
    distance_bound_dc,
    multi_hop_throughput,
)
from .specfun import lambert_w0

__all__ = [
    "Mode",
    "Status",
    "OptimizationOutcome",
    "ConvergenceError",
    "beta_star",
    "optimal_hop_length",
    "beta_fixed_point_residual",
    "golden_section_max",
    "reoptimize_beta",
    "unconstrained_optimum",
    "constrained_optimum",
    "nelder_mead_max",
    "numeric_cross_check",
    "integer_hop_optimum",
    "printed_optimal_throughput",
    "compare_printed_throughput",
]

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
BETA_SEARCH = (1e-6, 1e6)


class Mode(str, enum.Enum):
    """Feasibility semantics.

    ``PaperSecrecy`` treats the secrecy constraint as ``d <= d_c <= D``: a
    design exists iff ``d_c <= D``, and the hop length is capped at ``d_c``.
    ``StrictSecrecy`` uses the region implied directly by requiring the
    secrecy probability to be at least ``1 - epsilon``. That probability
    grows with ``d``, so the region is ``d_c <= d <= D``.
    """

    UNCONSTRAINED = "Unconstrained"
    PAPER = "PaperSecrecy"
    STRICT = "StrictSecrecy"


class Status(str, enum.Enum):
    FEASIBLE = "Feasible"
    INFEASIBLE = "Infeasible"


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class OptimizationOutcome:
    status: Status
    beta_star: float | None
    d_star: float | None
    hops: float | None
    throughput: float
    constraint_binding: bool
    mode: Mode
    d_c: float | None = None

    def as_dict(self) -> dict:
        return {
            "status": self.status.value,
            "beta_star": self.beta_star,
            "d_star": self.d_star,
            "hops": self.hops,
            "throughput": self.throughput,
            "d_c": self.d_c,
            "constraint_binding": self.constraint_binding,
            "mode": self.mode.value,
        }


def beta_star(alpha: float) -> float:
    """Throughput-optimal SIR threshold for path-loss exponent ``alpha``."""
    half = 0.5 * alpha
    w = lambert_w0(-half * math.exp(-half))
    return math.expm1(w + half)


def optimal_hop_length(p: SystemParams, beta: float) -> float:
    """Maximizer in ``d`` of the throughput at fixed ``beta`` (not clamped to D)."""
    return 1.0 / (p.D * p.lambda_int * p.kappa * math.pi * beta ** (2.0 / p.alpha))


def beta_fixed_point_residual(beta: float, alpha: float) -> float:
    """``beta/(1+beta) - (2/alpha) ln(1+beta)``; vanishes at the optimal threshold."""
    return beta / (1.0 + beta) - 2.0 / alpha * math.log1p(beta)


def golden_section_max(
    f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12, max_iter: int = 500
) -> tuple[float, float]:
    """Maximize a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``."""
    a, b = lo, hi
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if b - a <= tol * max(1.0, abs(a) + abs(b)):
            break
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
    best = max([(f1, x1), (f2, x2), (f(lo), lo), (f(hi), hi)])
    return best[1], best[0]


def _quiet_throughput(p: SystemParams, beta: float, d: float) -> float:
    return multi_hop_throughput(p, LinkDesign(beta, d), warn=False)


def reoptimize_beta(
    p: SystemParams, d: float, beta_range: tuple[float, float] = BETA_SEARCH
) -> tuple[float, float]:
    """Best SIR threshold at a fixed hop length; returns ``(beta, throughput)``."""
    lo, hi = math.log(beta_range[0]), math.log(beta_range[1])
    if lo == hi:
        b = beta_range[0]
        return b, _quiet_throughput(p, b, d)
    x, t = golden_section_max(lambda x: _quiet_throughput(p, math.exp(x), d), lo, hi)
    return math.exp(x), t


def _feasible(p, beta, d, binding, mode, d_c=None):
    return OptimizationOutcome(
        Status.FEASIBLE,
        beta,
        d,
        p.D / d,
        multi_hop_throughput(p, LinkDesign(beta, d)),
        binding,
        mode,
        d_c,
    )


def _at_fixed_d(p, d, mode, d_c=None):
    beta, _ = reoptimize_beta(p, d)
    return _feasible(p, beta, d, True, mode, d_c)


def unconstrained_optimum(p: SystemParams) -> OptimizationOutcome:
    """Closed-form optimum; falls back to a single hop with re-optimized beta if ``d* > D``."""
    b = beta_star(p.alpha)
    d = optimal_hop_length(p, b)
    if d > p.D:
        return _at_fixed_d(p, p.D, Mode.UNCONSTRAINED)
    return _feasible(p, b, d, False, Mode.UNCONSTRAINED)


def _infeasible(mode, d_c):
    return OptimizationOutcome(Status.INFEASIBLE, None, None, None, 0.0, False, mode, d_c)


def constrained_optimum(
    p: SystemParams, e: EavesdropperParams, s: SecrecySpec, mode: Mode | str = Mode.PAPER
) -> OptimizationOutcome:
    """Optimal design under the secrecy constraint.

    In both secrecy modes the problem is infeasible (throughput 0, no design)
    when ``d_c > D``.
    """
    mode = Mode(mode)
    d_c = distance_bound_dc(p, e, s)
    if mode is Mode.UNCONSTRAINED:
        return _with_dc(unconstrained_optimum(p), d_c)
    if d_c > p.D:
        return _infeasible(mode, d_c)

    d_free = optimal_hop_length(p, beta_star(p.alpha))
    if mode is Mode.PAPER:
        if d_free <= d_c:
            return _with_dc(unconstrained_optimum(p), d_c, mode)
        return _at_fixed_d(p, d_c, mode, d_c)

    d = min(max(d_free, d_c), p.D)
    if d == d_free:
        return _with_dc(unconstrained_optimum(p), d_c, mode)
    return _at_fixed_d(p, d, mode, d_c)


def _with_dc(out: OptimizationOutcome, d_c: float, mode: Mode | None = None) -> OptimizationOutcome:
    return replace(out, mode=mode or out.mode, d_c=d_c)


def nelder_mead_max(
    f: Callable[[Sequence[float]], float],
    x0: Sequence[float],
    lower: Sequence[float],
    upper: Sequence[float],
    step: Sequence[float],
    xtol: float = 1e-10,
    max_iter: int = 10_000,
) -> tuple[list[float], float]:
    """Box-bounded Nelder-Mead maximization.

    Trial points are clipped into the box. Converged when the simplex
    diameter drops below ``xtol``; raises ConvergenceError otherwise.
    """
    n = len(x0)

    def clip(x):
        return [min(max(xi, lo), hi) for xi, lo, hi in zip(x, lower, upper)]

    def fx(x):
        return -f(x)

    pts = [clip(list(x0))]
    for i in range(n):
        x = list(x0)
        x[i] = x[i] + step[i] if x[i] + step[i] <= upper[i] else x[i] - step[i]
        pts.append(clip(x))
    vals = [fx(x) for x in pts]

    for _ in range(max_iter):
        order = sorted(range(n + 1), key=lambda i: vals[i])
        pts = [pts[i] for i in order]
        vals = [vals[i] for i in order]
        diam = max(math.dist(pts[0], q) for q in pts[1:])
        if diam < xtol:
            return pts[0], -vals[0]

        centroid = [sum(q[j] for q in pts[:-1]) / n for j in range(n)]
        worst = pts[-1]
        xr = clip([c + (c - w) for c, w in zip(centroid, worst)])
        fr = fx(xr)
        if fr < vals[0]:
            xe = clip([c + 2.0 * (c - w) for c, w in zip(centroid, worst)])
            fe = fx(xe)
            pts[-1], vals[-1] = (xe, fe) if fe < fr else (xr, fr)
            continue
        if fr < vals[-2]:
            pts[-1], vals[-1] = xr, fr
            continue
        if fr < vals[-1]:
            xc = clip([c + 0.5 * (r - c) for c, r in zip(centroid, xr)])
        else:
            xc = clip([c + 0.5 * (w - c) for c, w in zip(centroid, worst)])
        fc = fx(xc)
        if fc < min(fr, vals[-1]):
            pts[-1], vals[-1] = xc, fc
            continue
        best = pts[0]
        for i in range(1, n + 1):
            pts[i] = clip([b + 0.5 * (q - b) for b, q in zip(best, pts[i])])
            vals[i] = fx(pts[i])
    raise ConvergenceError(f"simplex diameter did not fall below {xtol} in {max_iter} iterations")


class CrossCheck(NamedTuple):
    beta: float
    d: float
    throughput: float


def numeric_cross_check(
    p: SystemParams,
    box: tuple[tuple[float, float], tuple[float, float]],
    starts: int = 3,
) -> CrossCheck:
    """Numerically maximize throughput over a box of ``(beta, d)``.

    Runs Nelder-Mead from a ``starts x starts`` lattice of log-spaced
    starting points and a nested golden-section search (outer over log
    beta, inner closed-form hop length clamped to the box). Returns the best
    point found; ties go to the lexicographically smaller ``(beta, d)``.
    """
    (b_lo, b_hi), (d_lo, d_hi) = box
    if not (0 < b_lo <= b_hi and 0 < d_lo <= d_hi <= p.D * (1 + 1e-12)):
        raise ValueError(f"invalid search box {box!r} for D={p.D!r}")

    def throughput(beta, d):
        return _quiet_throughput(p, beta, d)

    lower = [math.log(b_lo), math.log(d_lo)]
    upper = [math.log(b_hi), math.log(d_hi)]
    candidates = []

    if lower == upper:
        return CrossCheck(b_lo, d_lo, throughput(b_lo, d_lo))

    def f(u):
        return throughput(math.exp(u[0]), math.exp(u[1]))

    step = [max(0.1 * (hi - lo), 1e-3) if hi > lo else 0.0 for lo, hi in zip(lower, upper)]
    for i in range(starts):
        for j in range(starts):
            x0 = [
                lo + (hi - lo) * (k + 0.5) / starts for lo, hi, k in zip(lower, upper, (i, j))
            ]
            u, _ = nelder_mead_max(f, x0, lower, upper, step)
            b, d = math.exp(u[0]), math.exp(u[1])
            candidates.append((b, d, throughput(b, d)))

    def inner(x):
        b = math.exp(x)
        d = min(max(optimal_hop_length(p, b), d_lo), d_hi)
        return throughput(b, d)

    x, _ = golden_section_max(inner, lower[0], upper[0])
    b = math.exp(x)
    d = min(max(optimal_hop_length(p, b), d_lo), d_hi)
    candidates.append((b, d, throughput(b, d)))

    best = max(candidates, key=lambda c: (c[2], -c[0], -c[1]))
    return CrossCheck(*best)


def integer_hop_optimum(p: SystemParams, h_max: int) -> tuple[int, float, float]:
    """Best integer hop count in ``1..h_max`` with beta re-optimized per count.

    Returns ``(h, beta, throughput)``; on ties the smaller hop count wins.
    """
    if h_max < 1:
        raise ValueError(f"h_max must be >= 1, got {h_max!r}")
    best = None
    for h in range(1, h_max + 1):
        beta, t = reoptimize_beta(p, p.D / h)
        if best is None or t > best[2]:
            best = (h, beta, t)
    return best


def printed_optimal_throughput(p: SystemParams) -> float:
    """Closed-form optimal throughput in the commonly quoted single-D form.

    ``ln(1 + beta*) / (e ln2 D lambda kappa pi beta*)``. This does not equal
    the throughput at ``(beta*, d*)``; see :func:`compare_printed_throughput`.
    """
    half = 0.5 * p.alpha
    exponent = lambert_w0(-half * math.exp(-half)) + half
    return exponent / (math.e * math.log(2.0) * p.D * p.lambda_int * p.kappa * math.pi * math.expm1(exponent))


class PrintedComparison(NamedTuple):
    printed: float
    self_consistent: float
    ratio: float
    predicted_ratio: float


def compare_printed_throughput(p: SystemParams) -> PrintedComparison:
    """Contrast the single-D closed form with the throughput at the optimum.

    Substituting ``(beta*, d*)`` into the throughput gives
    ``ln(1+beta*) / (e ln2 D^2 lambda kappa pi beta*^(2/a))``, so the two
    differ by the factor ``D * beta*^(2/a - 1)``, reported as
    ``predicted_ratio``.
    """
    b = beta_star(p.alpha)
    d = optimal_hop_length(p, b)
    printed = printed_optimal_throughput(p)
    consistent = multi_hop_throughput(p, LinkDesign(b, d))
    return PrintedComparison(printed, consistent, printed / consistent, p.D * b ** (2.0 / p.alpha - 1.0))
