"""
Bracketing an infinite sum of a unimodal summand by its integral.

For g >= 0 rising up to a single maximum at y_hat and falling after it,

    int_0^inf g(y) dy - g(y_hat) <= sum_{i>=1} g(i) <= int_0^inf g(y) dy + g(y_hat).

When the maximum sits below 1 the summand is monotone on [1, inf) and the
ordinary integral test is used instead.
"""
import logging
import math
from typing import Callable

import numpy as np
from scipy import optimize

from ..config import QuadraturePolicy, SeriesPolicy
from ..errors import UnimodalityCheckFailed
from ..quadrature import integrate_log_scale
from .models import SeriesBounds

logger = logging.getLogger(__name__)


def _local_maxima(values: np.ndarray) -> np.ndarray:
    v = np.concatenate(([-np.inf], values, [-np.inf]))
    left_ok = v[1:-1] > v[:-2]
    right_ok = v[1:-1] >= v[2:]
    return np.nonzero(left_ok & right_ok & (values > 0))[0]


def series_bounds(summand: Callable, x: float, span=None,
                  policy: SeriesPolicy = SeriesPolicy(),
                  quadrature: QuadraturePolicy = QuadraturePolicy()) -> SeriesBounds:
    """
    Bounds for sum_{i>=1} summand(i, x).

    `summand(y, x)` must accept arrays of y > 0. `span` is the (lo, hi) range of
    y scanned and integrated over; the default covers [1e-8, 1e12 max(1, x)].
    """
    def g(y):
        with np.errstate(over="ignore", under="ignore", divide="ignore", invalid="ignore"):
            return np.nan_to_num(np.asarray(summand(y, x), dtype=float), nan=0.0)

    lo, hi = span or (1e-8, 1e12 * max(1.0, x))
    grid = np.geomspace(lo, hi, policy.scan_points)
    values = g(grid)
    if np.any(values < 0):
        raise UnimodalityCheckFailed("summand takes negative values")
    if not np.any(values > 0):
        return SeriesBounds(0.0, 0.0, 0.0, 0.0, 0.0)

    maxima = _local_maxima(values)
    if len(maxima) != 1:
        raise UnimodalityCheckFailed(f"coarse scan found {len(maxima)} local maxima at y={grid[maxima].tolist()}")

    i = int(maxima[0])
    y_hat, g_hat = grid[i], values[i]
    a, b = math.log(grid[max(i - 1, 0)]), math.log(grid[min(i + 1, len(grid) - 1)])
    if b > a:
        res = optimize.minimize_scalar(lambda t: -float(g(math.exp(t))), bounds=(a, b), method="bounded",
                                       options={"xatol": 1e-12})
        if -res.fun > g_hat:
            y_hat, g_hat = math.exp(res.x), float(-res.fun)

    def integral(start: float) -> float:
        with np.errstate(divide="ignore"):
            sign, log_value = integrate_log_scale(
                lambda t: np.log(g(np.exp(t))) + t,
                lambda t, shift: g(np.exp(t)) * np.exp(t - shift),
                math.log(start), math.log(hi), quadrature,
            )
        return sign * math.exp(log_value) if np.isfinite(log_value) else 0.0

    if y_hat >= 1.0:
        total = integral(lo)
        bounds = SeriesBounds(max(total - g_hat, 0.0), total + g_hat, total, g_hat, y_hat)
    else:
        total = integral(1.0)
        g_one = float(g(np.array(1.0)))
        bounds = SeriesBounds(total, total + g_one, total, g_one, y_hat, boundary=True)
        logger.debug(f"Summand peaks at y={y_hat:.4g} < 1; using the integral test on [1, inf)")

    logger.debug(f"Series bounds at x={x:g}: [{bounds.lower:.6g}, {bounds.upper:.6g}], peak at {y_hat:.4g}")
    return bounds
