import logging
import math

import numpy as np

from ..config import Settings
from ..phase import PhaseType, ph_moment, ph_sample
from ..scaling import Scaler, scale_integral, scaler_moment
from .models import MixtureModel, TailDerivatives

logger = logging.getLogger(__name__)


def build_mixture(G: PhaseType, H: Scaler, settings: Settings = None) -> MixtureModel:
    M = MixtureModel(G=G, H=H, settings=settings or Settings())
    logger.info(f"Built mixture {M.describe()}")
    return M


def _check_x(x: float, strict: bool = False) -> float:
    x = float(x)
    if not np.isfinite(x) or x < 0 or (strict and x == 0):
        raise ValueError(f"x must be {'positive' if strict else 'nonnegative'} and finite, got {x}")
    return x


def _integral(M: MixtureModel, x: float, order: int):
    return scale_integral(M.H, M.spectral.kernel(order), x, order, M.settings)


def mixture_log_tail(M: MixtureModel, x: float) -> float:
    """log F-bar(x)."""
    x = _check_x(x)
    if x == 0:
        return 0.0
    sign, value = _integral(M, x, 0)
    if sign < 0:
        logger.warning(f"Tail integral at x={x:g} came out negative; clamping to 0")
        return -math.inf
    return min(value, 0.0)


def mixture_tail(M: MixtureModel, x):
    """F-bar(x) = int G-bar(x/s) dH(s); arrays are evaluated pointwise."""
    if np.ndim(x):
        return np.array([mixture_tail(M, v) for v in np.asarray(x, dtype=float)])
    return math.exp(mixture_log_tail(M, x))


def mixture_log_density(M: MixtureModel, x: float) -> float:
    x = _check_x(x, strict=True)
    sign, value = _integral(M, x, 1)
    return value if sign > 0 else -math.inf


def mixture_density(M: MixtureModel, x):
    """f(x) = int g(x/s)/s dH(s)."""
    if np.ndim(x):
        return np.array([mixture_density(M, v) for v in np.asarray(x, dtype=float)])
    return math.exp(mixture_log_density(M, x))


def mixture_derivatives(M: MixtureModel, x: float) -> TailDerivatives:
    """F-bar, f and f' = int g'(x/s)/s^2 dH(s) at x, from the analytic PH kernels."""
    x = _check_x(x, strict=True)
    slope_sign, log_abs_slope = _integral(M, x, 2)
    return TailDerivatives(
        x=x,
        log_tail=mixture_log_tail(M, x),
        log_density=mixture_log_density(M, x),
        slope_sign=slope_sign,
        log_abs_slope=log_abs_slope,
    )


def mixture_moment(M: MixtureModel, n: int) -> float:
    """E[(S Y)^n] = E[Y^n] E[S^n]; math.inf when the scaler moment diverges."""
    if n < 1 or int(n) != n:
        raise ValueError("moment order must be a positive integer")
    s_moment = scaler_moment(M.H, n)
    if math.isinf(s_moment):
        return math.inf
    return ph_moment(M.G, n) * s_moment


def mixture_sample(M: MixtureModel, rng_seed, count: int) -> np.ndarray:
    """Draws of S*Y with independent streams for S and Y."""
    if count < 1:
        raise ValueError("count must be at least 1")
    seq = rng_seed if isinstance(rng_seed, np.random.SeedSequence) else np.random.SeedSequence(rng_seed)
    s_seq, y_seq = seq.spawn(2)
    s = M.H.sample(np.random.default_rng(s_seq), count)
    y = ph_sample(M.G, np.random.default_rng(y_seq), count)
    return s * y
