"""
Expectations E[g(S)] against a scaling law, returned as (sign, log|value|).

Continuous laws are integrated on t = log s, finite laws summed exactly and
the infinite discrete laws (atoms at 1, 2, ...) go through the truncated
series engine.
"""
import logging
from typing import Callable

import numpy as np

from ..config import Settings
from ..phase.models import ExpPolyKernel
from ..quadrature import integrate_log_scale, sum_log_series
from .models import ContinuousScaler, DiscreteScaler, Scaler

logger = logging.getLogger(__name__)

DEFAULT_SETTINGS = Settings()


def expectation(H: Scaler, shifted_g: Callable, log_envelope_g: Callable, log_sup_g: float,
                settings: Settings = DEFAULT_SETTINGS):
    """
    shifted_g(s, log_weight) = g(s) exp(log_weight), log_envelope_g(s) >= log|g(s)|,
    log_sup_g >= log sup |g|.
    """
    if isinstance(H, ContinuousScaler):
        lo, hi = H.log_range()

        def log_weight(t):
            return H.logpdf(np.exp(t)) + t

        return integrate_log_scale(
            lambda t: log_envelope_g(np.exp(t)) + log_weight(t),
            lambda t, shift: shifted_g(np.exp(t), log_weight(t) - shift),
            lo, hi, settings.quadrature,
        )

    if not isinstance(H, DiscreteScaler):
        raise TypeError(f"unsupported scaler {H!r}")

    if H.finite:
        pts, prb = H.atoms()
        with np.errstate(divide="ignore"):
            lw = np.log(prb)
        env = log_envelope_g(pts) + lw
        if not np.any(np.isfinite(env)):
            return 0.0, -np.inf
        shift = float(np.max(env))
        total = float(np.sum(shifted_g(pts, lw - shift)))
        if total == 0.0:
            return 0.0, -np.inf
        return float(np.sign(total)), shift + float(np.log(abs(total)))

    return sum_log_series(
        lambda i, shift: shifted_g(i, H.log_pmf(i) - shift),
        lambda i: log_envelope_g(i) + H.log_pmf(i),
        lambda n: log_sup_g + H.log_tail(n),
        settings.series, settings.quadrature,
    )


def scale_integral(H: Scaler, kernel: ExpPolyKernel, x: float, p: int = 0,
                   settings: Settings = DEFAULT_SETTINGS):
    """
    Q_p[K](x) = E[K(x/S) S^-p] as (sign, log|value|).

    With the tail, density and density-derivative kernels of G and p = 0, 1, 2
    these are F-bar(x), f(x) and f'(x) of the scale mixture.
    """
    x = float(x)

    def shifted(s, log_weight):
        return kernel.scaled(x / s, log_weight - p * np.log(s))

    def envelope(s):
        return kernel.log_envelope(x / s) - p * np.log(s)

    bound = kernel.abs_bound()
    log_bound = float(np.log(bound)) if bound > 0 else -np.inf
    return expectation(H, shifted, envelope, log_bound, settings)
