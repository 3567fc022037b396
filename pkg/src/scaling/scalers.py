import logging
import math

import numpy as np

from ..errors import DomainError
from .models import (
    ExponentialScaler,
    FiniteDiscreteScaler,
    GammaScaler,
    GeometricScaler,
    LognormalScaler,
    ParetoScaler,
    PointMassScaler,
    Scaler,
    WeibullScaler,
    ZipfScaler,
)

logger = logging.getLogger(__name__)

FAMILIES = {
    "exponential": (ExponentialScaler, ("beta",)),
    "pareto": (ParetoScaler, ("alpha",)),
    "lognormal": (LognormalScaler, ("sigma",)),
    "weibull": (WeibullScaler, ("scale", "shape")),
    "gamma": (GammaScaler, ("shape", "rate")),
    "zipf": (ZipfScaler, ("alpha",)),
    "geometric": (GeometricScaler, ("p",)),
    "finite": (FiniteDiscreteScaler, ("points", "probs")),
    "point": (PointMassScaler, ("s",)),
}


def make_scaler(family: str, **params) -> Scaler:
    """Build a scaler from its family name and parameters, e.g. make_scaler("pareto", alpha=2.5)."""
    if family not in FAMILIES:
        raise DomainError(f"unknown scaler family '{family}', expected one of {sorted(FAMILIES)}")
    cls, names = FAMILIES[family]
    missing = [n for n in names if n not in params]
    extra = [n for n in params if n not in names]
    if missing or extra:
        raise DomainError(f"{family} scaler takes parameters {list(names)}; missing {missing}, unexpected {extra}")
    if family == "finite":
        params = {"points": tuple(params["points"]), "probs": tuple(params["probs"])}
    return cls(**params)


def scaler_tail(H: Scaler, s):
    """H-bar(s) = P(S > s)."""
    return H.tail(s)


def scaler_log_tail(H: Scaler, s):
    return H.log_tail(s)


def scaler_sample(H: Scaler, rng_seed, count: int) -> np.ndarray:
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    return H.sample(rng, count)


def scaler_moment(H: Scaler, alpha: float) -> float:
    """E[S^alpha]; math.inf when the moment diverges."""
    if alpha <= 0:
        raise DomainError(f"moment order must be positive, got {alpha}")
    value = H.moment(alpha)
    if math.isinf(value):
        logger.debug(f"E[S^{alpha}] diverges for {H.describe()}")
    return value
