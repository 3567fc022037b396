"""
Heavy/light classification and the grid functionals used as evidence for it.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Sequence

import numpy as np

from ..config import DiagnosticsPolicy
from ..mixture import MixtureModel, mixture_log_tail
from ..special import log_bessel_k
from .models import GeneralMixtureEvidence, TailClass, Trace, Trend

logger = logging.getLogger(__name__)

CONVERGENCE_NATS = 0.1


def geometric_grid(lo: float, hi: float, points_per_decade: int) -> np.ndarray:
    """Geometric grid from lo to hi (both included) with the given density."""
    if not (0 < lo < hi):
        raise ValueError(f"need 0 < lo < hi, got {lo}, {hi}")
    n = max(int(round(math.log10(hi / lo) * points_per_decade)), 1) + 1
    return np.geomspace(lo, hi, n)


def diagnostics_grid(policy: DiagnosticsPolicy) -> np.ndarray:
    return geometric_grid(policy.x_lo, policy.x_hi, policy.points_per_decade)


def grid_map(fn: Callable, xs: Iterable, threads: int = 1) -> List:
    """fn over xs, results in the order of xs."""
    xs = list(xs)
    if threads <= 1 or len(xs) < 2:
        return [fn(x) for x in xs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, xs))


def classify_trend(log_values: Sequence[float], run: int = 5) -> Trend:
    """
    Trend of a positive functional from the logs of its last `run` values.

    -inf counts as a further decrease. A total change below CONVERGENCE_NATS with
    shrinking steps reads as convergence.
    """
    tail = np.asarray(log_values, dtype=float)[-run:]
    if len(tail) < run or np.any(np.isnan(tail)):
        return Trend.INCONCLUSIVE
    if np.all(np.isneginf(tail[-2:])):
        return Trend.VANISHES
    if np.any(np.isinf(tail)):
        finite = tail[np.isfinite(tail)]
        if np.isneginf(tail[-1]) and np.all(np.diff(finite) < 0):
            return Trend.VANISHES
        return Trend.INCONCLUSIVE

    steps = np.diff(tail)
    change = abs(tail[-1] - tail[0])
    if change <= 1e-3 or (change <= CONVERGENCE_NATS and abs(steps[-1]) <= abs(steps[0])):
        return Trend.CONVERGES
    if np.all(steps < 0):
        return Trend.VANISHES
    if np.all(steps > 0):
        return Trend.DIVERGES
    return Trend.INCONCLUSIVE


def classify_tail(M: MixtureModel) -> TailClass:
    """Heavy exactly when the scaling law has unbounded support."""
    return TailClass.LIGHT if M.H.bounded else TailClass.HEAVY


def _as_log_tail(handle) -> Callable:
    return handle.log_tail if hasattr(handle, "log_tail") else handle


def classify_general_mixture(H1_tail, H2_tail, xi: Callable, theta_grid: Sequence[float],
                             x_grid: Sequence[float] = None, run: int = 5) -> List[GeneralMixtureEvidence]:
    """
    Numeric evidence for the two-light-tails criterion.

    H1_tail and H2_tail are scalers or callables returning log-tails. For each
    theta the traces of e^{theta x}(H1-bar(x/xi) + H2-bar(xi)) (tends to 0 for
    a light mixture) and e^{theta x} H1-bar(x/xi) H2-bar(xi) (tends to infinity
    for a heavy one) are classified. Evidence only, never a proof.
    """
    log_h1, log_h2 = _as_log_tail(H1_tail), _as_log_tail(H2_tail)
    x = np.asarray(x_grid if x_grid is not None else geometric_grid(10.0, 1e4, 8), dtype=float)
    xi_x = np.asarray([xi(v) for v in x], dtype=float)
    if np.any(xi_x <= 0):
        raise ValueError("xi must be positive on the grid")
    l1 = np.asarray(log_h1(x / xi_x), dtype=float)
    l2 = np.asarray(log_h2(xi_x), dtype=float)

    evidence = []
    for theta in theta_grid:
        with np.errstate(invalid="ignore"):
            s = theta * x + np.logaddexp(l1, l2)
            p = theta * x + l1 + l2
        evidence.append(GeneralMixtureEvidence(
            theta=float(theta),
            sum_trace=Trace("general_sum", x, s, classify_trend(s, run), log_scale=True),
            product_trace=Trace("general_product", x, p, classify_trend(p, run), log_scale=True),
        ))
        logger.debug(f"theta={theta:g}: sum {evidence[-1].sum_trace.trend.value}, "
                     f"product {evidence[-1].product_trace.trend.value}")
    return evidence


def weibull_condition(p: float, q: float) -> TailClass:
    """Product of Weibull laws with shapes p and q: light iff 1/p + 1/q < 1."""
    if p <= 0 or q <= 0:
        raise ValueError("shapes must be positive")
    return TailClass.LIGHT if 1.0 / p + 1.0 / q < 1.0 else TailClass.HEAVY


def weibull_gamma(p: float, q: float) -> float:
    """
    Exponent gamma for xi(x) = x^gamma: midpoint of (1/q, 1 - 1/p) in the light
    case, of (1 - 1/p, 1/q) in the heavy case, 1/q on the boundary.
    """
    a, b = 1.0 / q, 1.0 - 1.0 / p
    if math.isclose(a, b):
        return a
    return 0.5 * (a + b)


def weibull_product_tail(x: float, lam: float, beta: float, p: float) -> float:
    """
    Tail of S*Y for Weibull laws of equal shape p and scales lam, beta:
    2 (x/lam beta)^{p/2} K_1(2 (x/lam beta)^{p/2}). Heavy iff p < 2.
    """
    if x <= 0:
        return 1.0
    z = 2.0 * (x / (lam * beta)) ** (p / 2.0)
    return math.exp(math.log(z) + log_bessel_k(1, z))


def mixture_log_tails(M: MixtureModel, x_grid: Sequence[float], threads: int = 1) -> np.ndarray:
    return np.asarray(grid_map(lambda v: mixture_log_tail(M, v), np.asarray(x_grid, dtype=float), threads))


def exponential_moment_trace(M: MixtureModel, theta: float, x_grid: Sequence[float],
                             run: int = 5, threads: int = 1, log_tails=None) -> Trace:
    """log(e^{theta x} F-bar(x)) over the grid; eventually increasing for heavy tails."""
    x = np.asarray(x_grid, dtype=float)
    if log_tails is None:
        log_tails = mixture_log_tails(M, x, threads)
    values = theta * x + log_tails
    return Trace(f"exp_moment_theta_{theta:g}", x, values, classify_trend(values, run), log_scale=True)


def tail_ratio_trace(M: MixtureModel, reference_log_tail: Callable, x_grid: Sequence[float],
                     run: int = 5, threads: int = 1, name: str = "tail_ratio", log_tails=None) -> Trace:
    """F-bar(x) / reference(x); `reference_log_tail` returns the log of the reference tail."""
    x = np.asarray(x_grid, dtype=float)
    if log_tails is None:
        log_tails = mixture_log_tails(M, x, threads)
    log_ref = np.asarray([reference_log_tail(v) for v in x], dtype=float)
    with np.errstate(invalid="ignore"):
        log_ratio = log_tails - log_ref
    trend = classify_trend(log_ratio, run)
    with np.errstate(over="ignore"):
        ratio = np.exp(log_ratio)
    return Trace(name, x, ratio, trend)
