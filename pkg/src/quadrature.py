"""
Integration of sharply peaked positive-scale integrands.

All integrals are taken on a logarithmic axis t = log(s). The caller provides a
vectorized log-envelope (an upper profile of log|integrand|) and the integrand
itself premultiplied by exp(-shift). The envelope locates the mass, the window
is cut where the envelope has dropped by `drop_nats`, and QUADPACK integrates
the shifted integrand there, so nothing underflows however far out x is.
"""
import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, optimize

from .config import QuadraturePolicy, SeriesPolicy
from .errors import QuadratureNonconvergence, TruncationBoundViolated

logger = logging.getLogger(__name__)

# QUADPACK warnings are accepted when the reported error is still this small
ACCEPTED_RELATIVE_ERROR = 1e-7
LOG_HUGE = float(np.log(1e300))


@dataclass(frozen=True)
class LogWindow:
    lo: float
    hi: float
    peak: float
    log_peak: float


def _safe(fn: Callable, t) -> np.ndarray:
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        out = np.asarray(fn(np.asarray(t, dtype=float)), dtype=float)
    return np.where(np.isnan(out), -np.inf, out)


def locate_window(log_envelope: Callable, lo: float, hi: float,
                  policy: QuadraturePolicy = QuadraturePolicy()) -> LogWindow:
    """
    Find where exp(log_envelope) carries its mass inside [lo, hi].

    Returns a window with log_peak == -inf when the envelope vanishes everywhere.
    """
    if not (np.isfinite(lo) and np.isfinite(hi)) or hi <= lo:
        raise QuadratureNonconvergence(f"invalid integration range [{lo}, {hi}]")

    grid = np.linspace(lo, hi, policy.scan_points)
    phi = _safe(log_envelope, grid)
    if not np.any(np.isfinite(phi)):
        return LogWindow(lo, hi, 0.5 * (lo + hi), -np.inf)

    i = int(np.argmax(phi))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    peak, log_peak = grid[i], phi[i]
    if b > a:
        res = optimize.minimize_scalar(
            lambda t: -float(_safe(log_envelope, t)),
            bounds=(a, b), method="bounded", options={"xatol": 1e-10 * max(1.0, abs(grid[i]))},
        )
        if np.isfinite(res.fun) and -res.fun > log_peak:
            peak, log_peak = float(res.x), float(-res.fun)

    cutoff = log_peak - policy.drop_nats
    above = np.nonzero(phi >= cutoff)[0]
    step = grid[1] - grid[0]
    left = min(peak, grid[above[0]]) if len(above) else peak
    right = max(peak, grid[above[-1]]) if len(above) else peak

    # walk outward until the envelope has certainly dropped below the cutoff
    h = step / 8.0
    while left > lo and _safe(log_envelope, left) >= cutoff:
        left = max(lo, left - h)
        h *= 2.0
    h = step / 8.0
    while right < hi and _safe(log_envelope, right) >= cutoff:
        right = min(hi, right + h)
        h *= 2.0

    logger.debug(f"Integration window [{left:.4g}, {right:.4g}] peak {peak:.4g} log-peak {log_peak:.4g}")
    return LogWindow(left, right, peak, log_peak)


def integrate_log_scale(log_envelope: Callable, shifted_integrand: Callable, lo: float, hi: float,
                        policy: QuadraturePolicy = QuadraturePolicy()):
    """
    Integrate over t in [lo, hi] and return (sign, log|I|).

    `shifted_integrand(t, shift)` must return integrand(t) * exp(-shift).
    """
    window = locate_window(log_envelope, lo, hi, policy)
    if not np.isfinite(window.log_peak):
        return 0.0, -np.inf
    if window.hi <= window.lo:
        return 0.0, -np.inf

    shift = window.log_peak

    def f(t):
        return float(shifted_integrand(t, shift))

    points = [window.peak] if window.lo < window.peak < window.hi else None
    value, abserr, info = _quad(f, window.lo, window.hi, points, policy)

    if value == 0.0:
        return 0.0, -np.inf
    return float(np.sign(value)), shift + float(np.log(abs(value)))


def _quad(f, a, b, points, policy: QuadraturePolicy):
    out = integrate.quad(
        f, a, b, points=points, limit=policy.max_subdivisions,
        epsabs=0.0, epsrel=policy.tolerance, full_output=1,
    )
    value, abserr, info = out[0], out[1], out[2]
    if len(out) > 3:
        # ier != 0: keep the result when the error estimate is still acceptable
        if not np.isfinite(value) or abserr > max(ACCEPTED_RELATIVE_ERROR, policy.tolerance) * abs(value):
            raise QuadratureNonconvergence(
                f"quadrature on [{a:.6g}, {b:.6g}] did not converge "
                f"(estimate {value:.6g}, error {abserr:.3g}): {out[3]}"
            )
        logger.debug(f"Quadrature warning accepted, relative error {abserr / abs(value):.2e}")
    return value, abserr, info



def _count_maxima(log_envelope_t: Callable, lo: float, hi: float, points: int) -> int:
    grid = np.linspace(lo, hi, points)
    phi = _safe(log_envelope_t, grid)
    phi = np.where(np.isfinite(phi), phi, -1e308)
    rising = np.diff(phi) > 0
    # a maximum is a rise followed by a fall; the left edge counts when the profile starts falling
    interior = np.sum(rising[:-1] & ~rising[1:] & (np.diff(phi)[1:] < 0))
    return int(interior + (not rising[0]))


def _direct_sum(shifted_terms: Callable, first: int, last: int, shift: float, chunk: int):
    total, absolute = 0.0, 0.0
    for a in range(first, last + 1, chunk):
        i = np.arange(a, min(a + chunk, last + 1), dtype=float)
        g = shifted_terms(i, shift)
        total += float(np.sum(g))
        absolute += float(np.sum(np.abs(g)))
    return total, absolute


def sum_log_series(shifted_terms: Callable, log_envelope: Callable, log_remainder_bound: Callable,
                   series: SeriesPolicy = SeriesPolicy(),
                   quadrature: QuadraturePolicy = QuadraturePolicy()):
    """
    Sum g(1) + g(2) + ... and return (sign, log|S|).

    shifted_terms(y, shift) is g(y) exp(-shift) for real y >= 1, log_envelope(y)
    an upper profile of log|g(y)|. When the envelope has a single maximum the
    terms are summed up to N and the rest is the Euler-Maclaurin remainder
    int_N^inf g - g(N)/2, with N grown until the first neglected correction
    |g'(N)|/12 is below tolerance. Otherwise terms are added until
    log_remainder_bound(N), a majorant of sum_{i>N} |g(i)|, is small enough.
    """
    def envelope_t(t):
        return log_envelope(np.exp(t))

    window = locate_window(envelope_t, 0.0, LOG_HUGE, quadrature)
    if not np.isfinite(window.log_peak):
        return 0.0, -np.inf
    shift = window.log_peak
    y_peak = float(np.exp(window.peak))
    unimodal = _count_maxima(envelope_t, 0.0, window.hi, series.scan_points) <= 1
    if not unimodal:
        logger.warning("Series terms are not unimodal; summing against the remainder majorant")

    n = int(min(max(64, np.ceil(2.0 * y_peak) + 1), series.max_terms))
    done, partial, absolute = 0, 0.0, 0.0
    while True:
        add, add_abs = _direct_sum(shifted_terms, done + 1, n, shift, series.chunk)
        partial, absolute, done = partial + add, absolute + add_abs, n

        if unimodal:
            sign, log_rest = integrate_log_scale(
                lambda t: envelope_t(t) + t,
                lambda t, sh: shifted_terms(np.exp(t), sh - t),
                float(np.log(n)), LOG_HUGE, quadrature,
            )
            rest = sign * np.exp(log_rest - shift) if np.isfinite(log_rest) else 0.0
            g_n, g_next = shifted_terms(np.array([n, n + 1.0]), shift)
            estimate = partial + rest - 0.5 * g_n
            error = abs(g_next - g_n) / 12.0
            if error <= series.tolerance * (absolute + abs(rest)):
                logger.debug(f"Series truncated at N={n}, remainder {rest:.3e}, error estimate {error:.2e}")
                return _signed_log(estimate, shift)
        else:
            bound = np.exp(log_remainder_bound(n) - shift)
            if bound <= series.tolerance * absolute:
                logger.debug(f"Series summed to N={n}, remainder majorant {bound:.2e}")
                return _signed_log(partial, shift)

        if n >= series.max_terms:
            raise TruncationBoundViolated(
                f"series not within tolerance {series.tolerance:g} after {series.max_terms} terms"
            )
        n = min(4 * n, series.max_terms)


def _signed_log(value: float, shift: float):
    if value == 0.0:
        return 0.0, -np.inf
    return float(np.sign(value)), shift + float(np.log(abs(value)))
