import logging
from dataclasses import dataclass

import numpy as np
from scipy import special

from ..errors import DomainError, PrecisionLoss

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpecialFnPolicy:
    series_terms: int = 500
    asymptotic_switch: float = 10.0
    tolerance: float = 1e-14

    def __post_init__(self):
        if self.tolerance <= 0:
            raise DomainError("tolerance must be positive")
        if self.asymptotic_switch <= 0:
            raise DomainError("asymptotic_switch must be positive")
        if self.series_terms < 1:
            raise DomainError("series_terms must be at least 1")


DEFAULT_POLICY = SpecialFnPolicy()
BRANCH_TOL = 1e-12       # ex + 1 below -BRANCH_TOL is outside the domain
BRANCH_SERIES = 1e-6     # ex + 1 below this uses the branch-point expansion


def _result(value, what):
    value = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(value)) or np.any(value == 0):
        raise PrecisionLoss(f"{what} is not representable in double precision")
    return float(value) if value.ndim == 0 else value


def bessel_k(nu, z):
    """
    Modified Bessel function of the second kind K_nu(z) for real order, z > 0.

    AMOS evaluation (power series for small z, continued fraction / asymptotic
    expansion beyond); raises PrecisionLoss where K underflows, in which case
    log_bessel_k still works.
    """
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0) or np.any(np.isnan(z)):
        raise DomainError(f"bessel_k needs z > 0, got {z}")
    return _result(special.kv(nu, z), f"K_{nu}({z})")


def log_bessel_k(nu, z):
    """log K_nu(z) through the exponentially scaled function; safe for large z."""
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0) or np.any(np.isnan(z)):
        raise DomainError(f"log_bessel_k needs z > 0, got {z}")
    scaled = special.kve(nu, z)
    if not np.all(np.isfinite(scaled)) or np.any(scaled == 0):
        raise PrecisionLoss(f"K_{nu}({z}) overflows even in scaled form")
    out = np.log(scaled) - z
    return float(out) if out.ndim == 0 else out


def bessel_k_derivative_asymptotic(n: int, nu, z, policy: SpecialFnPolicy = DEFAULT_POLICY):
    """Leading large-z term of the n-th z-derivative of K_nu: (-1)^n sqrt(pi/2z) e^-z."""
    z = np.asarray(z, dtype=float)
    if np.any(z < policy.asymptotic_switch):
        raise DomainError(f"asymptotic form requires z >= {policy.asymptotic_switch}, got {z}")
    if n < 0 or int(n) != n:
        raise DomainError(f"derivative order must be a nonnegative integer, got {n}")
    out = (-1) ** int(n) * np.sqrt(np.pi / (2 * z)) * np.exp(-z)
    return float(out) if out.ndim == 0 else out


def lambert_w(x, policy: SpecialFnPolicy = DEFAULT_POLICY):
    """Principal branch W_0 for real x >= -1/e."""
    x = np.asarray(x, dtype=float)
    if np.any(np.isnan(x)):
        raise DomainError(f"lambert_w needs x >= -1/e, got {x}")
    q = np.e * x + 1.0                      # distance from the branch point, scaled
    if np.any(q < -BRANCH_TOL):
        raise DomainError(f"lambert_w needs x >= -1/e, got {x}")
    near = q < BRANCH_SERIES
    # W = -1 + p - p^2/3 + 11 p^3/72 with p = sqrt(2(ex + 1))
    p = np.sqrt(2.0 * np.maximum(q, 0.0))
    series = -1.0 + p - p * p / 3.0 + 11.0 * p ** 3 / 72.0
    w = special.lambertw(np.where(near, 0.0, x), 0, tol=policy.tolerance)
    if np.any(np.abs(w.imag) > 1e-12 * np.maximum(1.0, np.abs(w.real))):
        raise PrecisionLoss(f"lambert_w({x}) left the real axis")
    out = np.where(near, series, w.real)
    if not np.all(np.isfinite(out)):
        raise PrecisionLoss(f"lambert_w({x}) is not finite")
    return float(out) if out.ndim == 0 else out


def gamma_fn(a):
    a = np.asarray(a, dtype=float)
    if np.any(a <= 0) or np.any(np.isnan(a)):
        raise DomainError(f"gamma_fn needs a > 0, got {a}")
    return _result(special.gamma(a), f"Gamma({a})")


def log_gamma(a):
    a = np.asarray(a, dtype=float)
    if np.any(a <= 0):
        raise DomainError(f"log_gamma needs a > 0, got {a}")
    out = special.gammaln(a)
    return float(out) if out.ndim == 0 else out


def riemann_zeta(alpha):
    """zeta(alpha) = sum_i i^-alpha for alpha > 1 (Euler-Maclaurin in cephes)."""
    alpha = np.asarray(alpha, dtype=float)
    if np.any(alpha <= 1) or np.any(np.isnan(alpha)):
        raise DomainError(f"riemann_zeta needs alpha > 1, got {alpha}")
    return _result(special.zeta(alpha, 1), f"zeta({alpha})")
