import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from scipy import special, stats

from ..errors import DomainError

logger = logging.getLogger(__name__)

LOG_TINY = math.log(1e-300)
LOG_HUGE = math.log(1e300)
PROBABILITY_TOL = 1e-10


class Kind(Enum):
    CONTINUOUS = "continuous"
    DISCRETE = "discrete"


class Availability(Enum):
    CLOSED_FORM = "closed_form"
    ASYMPTOTIC = "asymptotic"
    NUMERIC = "numeric"


def _positive(name, value):
    if not (isinstance(value, (int, float)) and np.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be a positive number, got {value!r}")
    return float(value)


class Scaler(ABC):
    """Law of the multiplier S in X = S*Y. Support is [lower, upper]."""
    family: str
    kind: Kind
    lower: float
    upper: float

    @property
    def bounded(self) -> bool:
        return np.isfinite(self.upper)

    @property
    def regular_variation_index(self) -> Optional[float]:
        """alpha when H-bar is regularly varying with index -alpha, else None."""
        return None

    @abstractmethod
    def log_tail(self, s):
        ...

    def tail(self, s):
        with np.errstate(under="ignore"):
            return np.exp(self.log_tail(s))

    @abstractmethod
    def moment(self, alpha: float) -> float:
        ...

    @abstractmethod
    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        ...

    @abstractmethod
    def to_dict(self) -> dict:
        ...

    def describe(self) -> str:
        params = ", ".join(f"{k}={v}" for k, v in self.to_dict().items() if k != "family")
        return f"{self.family}({params})"


# ---------- continuous families ----------
class ContinuousScaler(Scaler):
    kind = Kind.CONTINUOUS

    @abstractmethod
    def logpdf(self, s):
        ...

    @abstractmethod
    def frozen(self):
        """The equivalent frozen scipy.stats distribution."""

    def pdf(self, s):
        with np.errstate(under="ignore"):
            return np.exp(self.logpdf(s))

    def log_range(self) -> Tuple[float, float]:
        """Support of H on the log axis, clipped to [LOG_TINY, LOG_HUGE]."""
        lo = math.log(self.lower) if self.lower > 0 else LOG_TINY
        hi = math.log(self.upper) if np.isfinite(self.upper) else LOG_HUGE
        return max(lo, LOG_TINY), min(hi, LOG_HUGE)

    def sample(self, rng, count):
        return self.frozen().ppf(rng.random(count))


def _on_support(s, lower, values, outside):
    s = np.asarray(s, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(s >= lower, values(np.maximum(s, lower if lower > 0 else 1e-300)), outside)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=True)
class ExponentialScaler(ContinuousScaler):
    beta: float
    family = "exponential"
    lower = 0.0
    upper = math.inf

    def __post_init__(self):
        _positive("beta", self.beta)

    def log_tail(self, s):
        return _on_support(s, 0.0, lambda v: -self.beta * v, 0.0)

    def logpdf(self, s):
        return _on_support(s, 0.0, lambda v: math.log(self.beta) - self.beta * v, -np.inf)

    def frozen(self):
        return stats.expon(scale=1.0 / self.beta)

    def moment(self, alpha):
        return math.exp(special.gammaln(alpha + 1) - alpha * math.log(self.beta))

    def to_dict(self):
        return {"family": self.family, "beta": self.beta}


@dataclass(frozen=True, eq=True)
class ParetoScaler(ContinuousScaler):
    """H-bar(s) = s^-alpha on s >= 1."""
    alpha: float
    family = "pareto"
    lower = 1.0
    upper = math.inf

    def __post_init__(self):
        _positive("alpha", self.alpha)

    @property
    def regular_variation_index(self):
        return self.alpha

    def log_tail(self, s):
        return _on_support(s, 1.0, lambda v: -self.alpha * np.log(v), 0.0)

    def logpdf(self, s):
        return _on_support(s, 1.0, lambda v: math.log(self.alpha) - (self.alpha + 1) * np.log(v), -np.inf)

    def frozen(self):
        return stats.pareto(b=self.alpha)

    def moment(self, alpha):
        if alpha >= self.alpha:
            return math.inf
        return self.alpha / (self.alpha - alpha)

    def to_dict(self):
        return {"family": self.family, "alpha": self.alpha}


@dataclass(frozen=True, eq=True)
class LognormalScaler(ContinuousScaler):
    """LN(0, sigma)."""
    sigma: float
    family = "lognormal"
    lower = 0.0
    upper = math.inf

    def __post_init__(self):
        _positive("sigma", self.sigma)

    def log_tail(self, s):
        return _on_support(s, 0.0, lambda v: special.log_ndtr(-np.log(v) / self.sigma), 0.0)

    def logpdf(self, s):
        c = math.log(self.sigma * math.sqrt(2 * math.pi))
        return _on_support(s, 0.0, lambda v: -np.log(v) ** 2 / (2 * self.sigma ** 2) - np.log(v) - c, -np.inf)

    def frozen(self):
        return stats.lognorm(s=self.sigma)

    def moment(self, alpha):
        return math.exp(0.5 * alpha ** 2 * self.sigma ** 2)

    def to_dict(self):
        return {"family": self.family, "sigma": self.sigma}


@dataclass(frozen=True, eq=True)
class WeibullScaler(ContinuousScaler):
    """H-bar(s) = exp(-(s/scale)^shape)."""
    scale: float
    shape: float
    family = "weibull"
    lower = 0.0
    upper = math.inf

    def __post_init__(self):
        _positive("scale", self.scale)
        _positive("shape", self.shape)

    def log_tail(self, s):
        return _on_support(s, 0.0, lambda v: -(v / self.scale) ** self.shape, 0.0)

    def logpdf(self, s):
        k, lam = self.shape, self.scale
        return _on_support(
            s, 0.0, lambda v: math.log(k / lam) + (k - 1) * np.log(v / lam) - (v / lam) ** k, -np.inf
        )

    def frozen(self):
        return stats.weibull_min(c=self.shape, scale=self.scale)

    def moment(self, alpha):
        return self.scale ** alpha * math.exp(special.gammaln(1 + alpha / self.shape))

    def to_dict(self):
        return {"family": self.family, "scale": self.scale, "shape": self.shape}


@dataclass(frozen=True, eq=True)
class GammaScaler(ContinuousScaler):
    shape: float
    rate: float
    family = "gamma"
    lower = 0.0
    upper = math.inf

    def __post_init__(self):
        _positive("shape", self.shape)
        _positive("rate", self.rate)

    def log_tail(self, s):
        a, b = self.shape, self.rate

        def log_upper_gamma(v):
            z = b * v
            with np.errstate(divide="ignore"):
                direct = np.log(special.gammaincc(a, z))
            # Gamma(a, z) ~ z^(a-1) e^-z (1 + (a-1)/z) once the regularised value underflows
            asymptotic = (a - 1) * np.log(z) - z - special.gammaln(a) + np.log1p((a - 1) / z)
            return np.where(np.isfinite(direct), direct, asymptotic)

        return _on_support(s, 0.0, log_upper_gamma, 0.0)

    def logpdf(self, s):
        a, b = self.shape, self.rate
        c = a * math.log(b) - special.gammaln(a)
        return _on_support(s, 0.0, lambda v: c + (a - 1) * np.log(v) - b * v, -np.inf)

    def frozen(self):
        return stats.gamma(a=self.shape, scale=1.0 / self.rate)

    def moment(self, alpha):
        return math.exp(special.gammaln(self.shape + alpha) - special.gammaln(self.shape)
                        - alpha * math.log(self.rate))

    def to_dict(self):
        return {"family": self.family, "shape": self.shape, "rate": self.rate}


# ---------- discrete families ----------
class DiscreteScaler(Scaler):
    """Atoms s_i with probabilities p_i. Infinite families use s_i = i, i >= 1."""
    kind = Kind.DISCRETE
    finite: bool

    def atoms(self) -> Tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError(f"{self.family} has infinitely many atoms")

    def log_pmf(self, i):
        raise NotImplementedError


@dataclass(frozen=True, eq=True)
class ZipfScaler(DiscreteScaler):
    """p_i = i^-alpha / zeta(alpha), i >= 1."""
    alpha: float
    family = "zipf"
    lower = 1.0
    upper = math.inf
    finite = False

    def __post_init__(self):
        _positive("alpha", self.alpha)
        if self.alpha < 2:
            raise DomainError(f"zipf scaling needs alpha >= 2, got {self.alpha}")

    @property
    def regular_variation_index(self):
        return self.alpha - 1

    @property
    def log_zeta(self) -> float:
        return math.log(special.zeta(self.alpha, 1))

    def log_pmf(self, i):
        return -self.alpha * np.log(i) - self.log_zeta

    def log_tail(self, s):
        def hurwitz(v):
            return np.log(special.zeta(self.alpha, np.floor(v) + 1)) - self.log_zeta
        return _on_support(s, 1.0, hurwitz, 0.0)

    def moment(self, alpha):
        if alpha >= self.alpha - 1:
            return math.inf
        return float(special.zeta(self.alpha - alpha, 1) / special.zeta(self.alpha, 1))

    def sample(self, rng, count):
        return rng.zipf(self.alpha, size=count).astype(float)

    def to_dict(self):
        return {"family": self.family, "alpha": self.alpha}


@dataclass(frozen=True, eq=True)
class GeometricScaler(DiscreteScaler):
    """p_i = p q^(i-1), i >= 1, so H-bar(k) = q^k."""
    p: float
    family = "geometric"
    lower = 1.0
    upper = math.inf
    finite = False

    def __post_init__(self):
        _positive("p", self.p)
        if self.p >= 1:
            raise DomainError(f"geometric scaling needs 0 < p < 1, got {self.p}")

    @property
    def log_q(self) -> float:
        return math.log1p(-self.p)

    def log_pmf(self, i):
        return math.log(self.p) + (np.asarray(i, dtype=float) - 1) * self.log_q

    def log_tail(self, s):
        return _on_support(s, 0.0, lambda v: np.floor(v) * self.log_q, 0.0)

    def moment(self, alpha):
        # terms k^alpha q^(k-1) p fall below 1e-18 of the total long before k_max
        k_max = int(60.0 / -self.log_q + 40 * (alpha + 1) / -self.log_q) + 10
        k = np.arange(1, k_max + 1, dtype=float)
        return float(np.sum(np.exp(alpha * np.log(k) + self.log_pmf(k))))

    def sample(self, rng, count):
        u = rng.random(count)
        return np.maximum(np.ceil(np.log1p(-u) / self.log_q), 1.0)

    def to_dict(self):
        return {"family": self.family, "p": self.p}


@dataclass(frozen=True, eq=False)
class FiniteDiscreteScaler(DiscreteScaler):
    points: Tuple[float, ...]
    probs: Tuple[float, ...]
    family = "finite"
    upper = None
    lower = None
    finite = True

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        prb = np.asarray(self.probs, dtype=float)
        if pts.ndim != 1 or pts.shape != prb.shape or pts.size == 0:
            raise DomainError("points and probs must be non-empty lists of equal length")
        if np.any(~np.isfinite(pts)) or np.any(pts <= 0):
            raise DomainError("finite scaler points must be positive (no atom at 0)")
        if np.any(prb < 0) or abs(prb.sum() - 1.0) > PROBABILITY_TOL:
            raise DomainError(f"probs must be nonnegative and sum to 1, got sum {prb.sum():.12g}")
        order = np.argsort(pts)
        object.__setattr__(self, "points", tuple(pts[order].tolist()))
        object.__setattr__(self, "probs", tuple(prb[order].tolist()))
        object.__setattr__(self, "lower", float(pts.min()))
        object.__setattr__(self, "upper", float(pts.max()))

    def __eq__(self, other):
        return isinstance(other, FiniteDiscreteScaler) and (self.points, self.probs) == (other.points, other.probs)

    def __hash__(self):
        return hash((self.points, self.probs))

    def atoms(self):
        return np.asarray(self.points), np.asarray(self.probs)

    def log_tail(self, s):
        pts, prb = self.atoms()
        s = np.asarray(s, dtype=float)
        mass = np.sum(np.where(pts > s[..., None], prb, 0.0), axis=-1)
        with np.errstate(divide="ignore"):
            out = np.log(np.clip(mass, 0.0, 1.0))
        return float(out) if out.ndim == 0 else out

    def moment(self, alpha):
        pts, prb = self.atoms()
        return float(np.sum(prb * pts ** alpha))

    def sample(self, rng, count):
        pts, prb = self.atoms()
        return rng.choice(pts, size=count, p=prb)

    def to_dict(self):
        return {"family": self.family, "points": list(self.points), "probs": list(self.probs)}


@dataclass(frozen=True, eq=True)
class PointMassScaler(DiscreteScaler):
    s: float
    family = "point"
    finite = True

    def __post_init__(self):
        _positive("s", self.s)

    @property
    def lower(self):
        return self.s

    @property
    def upper(self):
        return self.s

    def atoms(self):
        return np.array([self.s]), np.array([1.0])

    def log_tail(self, s):
        s = np.asarray(s, dtype=float)
        out = np.where(s < self.s, 0.0, -np.inf)
        return float(out) if out.ndim == 0 else out

    def moment(self, alpha):
        return self.s ** alpha

    def sample(self, rng, count):
        return np.full(count, self.s)

    def to_dict(self):
        return {"family": self.family, "s": self.s}
