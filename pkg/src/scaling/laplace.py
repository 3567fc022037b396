import logging
import math

import numpy as np
from scipy import special

from ..config import Settings
from ..errors import DomainError
from ..special import lambert_w, log_bessel_k
from .integrals import DEFAULT_SETTINGS, expectation
from .models import Availability, ExponentialScaler, GammaScaler, LognormalScaler, PointMassScaler, Scaler

logger = logging.getLogger(__name__)


def _gamma_params(H: Scaler):
    if isinstance(H, ExponentialScaler):
        return 1.0, H.beta
    if isinstance(H, GammaScaler):
        return H.shape, H.rate
    return None


class ReciprocalLaplace:
    """
    L_{1/S}(theta) = E[exp(-theta/S)] and its derivatives through the
    reciprocal moments M_k(theta) = E[S^-k exp(-theta/S)] = (-1)^k L^(k)(theta).

    Gamma laws (exponential included) have the inverse-gamma Bessel form,
    lognormal laws additionally expose the Lambert W saddle-point asymptotics,
    everything else is integrated or summed numerically.
    """

    def __init__(self, H: Scaler, settings: Settings = DEFAULT_SETTINGS):
        self.H = H
        self.settings = settings
        if _gamma_params(H) is not None:
            self.availability = Availability.CLOSED_FORM
        elif isinstance(H, LognormalScaler):
            self.availability = Availability.ASYMPTOTIC
        else:
            self.availability = Availability.NUMERIC

    def __repr__(self):
        return f"ReciprocalLaplace({self.H.describe()}, {self.availability.value})"

    def log_moment(self, k: int, theta: float) -> float:
        """log M_k(theta)."""
        if k < 0 or int(k) != k:
            raise DomainError(f"derivative order must be a nonnegative integer, got {k}")
        if theta < 0:
            raise DomainError(f"theta must be nonnegative, got {theta}")
        if theta == 0 and k == 0:
            return 0.0

        params = _gamma_params(self.H)
        if params is not None:
            a, b = params
            if theta == 0:
                return k * math.log(b) + special.gammaln(a - k) - special.gammaln(a) if a > k else math.inf
            return (math.log(2.0) + a * math.log(b) - special.gammaln(a)
                    + 0.5 * (a - k) * math.log(theta / b) + log_bessel_k(a - k, 2.0 * math.sqrt(b * theta)))

        if isinstance(self.H, PointMassScaler):
            return -k * math.log(self.H.s) - theta / self.H.s

        sign, value = expectation(
            self.H,
            lambda s, lw: np.exp(-k * np.log(s) - theta / s + lw),
            lambda s: -k * np.log(s) - theta / s,
            0.0,
            self.settings,
        )
        return value

    def moment(self, k: int, theta: float) -> float:
        return math.exp(self.log_moment(k, theta))

    def value(self, theta: float) -> float:
        return self.moment(0, theta)

    def derivative(self, k: int, theta: float) -> float:
        return (-1) ** int(k) * self.moment(k, theta)

    # ---------- lognormal saddle point ----------
    def omega(self, k: int, theta: float) -> float:
        """omega_k(theta) = W(theta sigma^2 e^{k sigma^2})."""
        s2 = self._lognormal_sigma2()
        return lambert_w(theta * s2 * math.exp(k * s2))

    def sigma2(self, k: int, theta: float) -> float:
        """sigma_k(theta)^2 = sigma^2 / (1 + omega_k(theta))."""
        return self._lognormal_sigma2() / (1.0 + self.omega(k, theta))

    def asymptotic_log_moment(self, k: int, theta: float) -> float:
        """log of L(theta) exp(-k omega_0 + sigma_0^2 k^2 / 2), valid as theta grows."""
        s2 = self._lognormal_sigma2()
        w = self.omega(0, theta)
        log_l = -(w * w + 2.0 * w) / (2.0 * s2) - 0.5 * math.log1p(w)
        return log_l - k * w + 0.5 * self.sigma2(0, theta) * k * k

    def _lognormal_sigma2(self) -> float:
        if not isinstance(self.H, LognormalScaler):
            raise DomainError(f"saddle-point asymptotics need a lognormal scaler, got {self.H.family}")
        return self.H.sigma ** 2


def reciprocal_laplace(H: Scaler, settings: Settings = DEFAULT_SETTINGS) -> ReciprocalLaplace:
    rl = ReciprocalLaplace(H, settings)
    logger.debug(f"Reciprocal Laplace transform for {H.describe()}: {rl.availability.value}")
    return rl


def reciprocal_moment(H: Scaler, k: int, theta: float, settings: Settings = DEFAULT_SETTINGS) -> float:
    """M_k(theta) = E[S^-k exp(-theta/S)]."""
    return ReciprocalLaplace(H, settings).moment(k, theta)


def scaler_laplace(H: Scaler, theta: float, settings: Settings = DEFAULT_SETTINGS) -> float:
    """L_S(theta) = E[exp(-theta S)]."""
    if theta < 0:
        raise DomainError(f"theta must be nonnegative, got {theta}")
    if theta == 0:
        return 1.0
    params = _gamma_params(H)
    if params is not None:
        a, b = params
        return (b / (b + theta)) ** a
    sign, value = expectation(
        H,
        lambda s, lw: np.exp(-theta * s + lw),
        lambda s: -theta * np.asarray(s, dtype=float),
        0.0,
        settings,
    )
    return math.exp(value)
