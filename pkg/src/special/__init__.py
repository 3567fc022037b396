"""Special functions used by the closed-form tails and asymptotes."""

from .functions import (
    DEFAULT_POLICY,
    SpecialFnPolicy,
    bessel_k,
    bessel_k_derivative_asymptotic,
    gamma_fn,
    lambert_w,
    log_bessel_k,
    log_gamma,
    riemann_zeta,
)

__all__ = [
    'DEFAULT_POLICY', 'SpecialFnPolicy', 'bessel_k', 'bessel_k_derivative_asymptotic', 'gamma_fn',
    'lambert_w', 'log_bessel_k', 'log_gamma', 'riemann_zeta',
]
