"""
Gumbel-domain diagnostics and asymptotes.

The von Mises ratio R(x) = F-bar F'' / (F')^2 and the auxiliary function
a(x) = F-bar / f are evaluated from analytic derivatives wherever the scaling
law allows it:

* gamma and exponential scaling: F-bar(x) = sum c_jk x^k M_k(lambda_j x) with
  the Bessel-form reciprocal moments, so every derivative is closed form;
* other laws: the density and its derivative come from integrating the PH
  density kernels against H;
* when that quadrature fails, central differences of F-bar with step x*1e-4.

A Gumbel verdict needs both a theorem route for the scaling family and a trace
that visibly approaches -1. Numerics alone never promote a verdict.
"""
import logging
import math
from typing import List, Sequence

import numpy as np
from scipy import special
from scipy.special import logsumexp

from ..config import Settings
from ..errors import DerivativeNoise, NumericalError
from ..mixture import MixtureModel, TailDerivatives, build_mixture, mixture_derivatives, mixture_log_tail
from ..phase import PhaseType, SpectralForm
from ..scaling import (ExponentialScaler, GammaScaler, GeometricScaler, LognormalScaler,
                       reciprocal_laplace)
from ..special import log_bessel_k
from .classify import classify_trend, diagnostics_grid, grid_map
from .models import (AsymptoteForm, AsymptoteKind, GumbelCheck, Mda, MdaKind, SubexpCheck,
                     Subexponential, Trace)

logger = logging.getLogger(__name__)

FD_STEP = 1e-4
NOISE_LIMIT = 0.1
ROUNDING_FLOOR = 1e-9      # |R+1| changes below this are rounding, not trend

THEOREM_ROUTES = {
    "exponential": "exponential scaling: the reciprocal Laplace transform is a von Mises function",
    "gamma": "gamma scaling: Bessel-form reciprocal moments give a von Mises tail",
    "lognormal": "lognormal scaling: saddle-point derivative asymptotics give a von Mises tail",
    "geometric": "geometric scaling: Bessel-form series asymptotics give a von Mises tail",
}
BOUNDED_ROUTE = "bounded scaling: a finite mixture of phase-type tails"

# exponent rho with a(tx)/a(x) -> t^rho
AUXILIARY_EXPONENTS = {
    "exponential": 0.5,
    "gamma": 0.5,
    "geometric": 0.5,
    "lognormal": 1.0,
    "pareto": 1.0,
    "zipf": 1.0,
}


def theorem_route(M: MixtureModel):
    if M.H.bounded:
        return BOUNDED_ROUTE
    return THEOREM_ROUTES.get(M.H.family)


# ---------- derivatives ----------
def _gamma_params(H):
    if isinstance(H, ExponentialScaler):
        return 1.0, H.beta
    if isinstance(H, GammaScaler):
        return H.shape, H.rate
    return None


def _laplace(M: MixtureModel):
    if "reciprocal_laplace" not in M._cache:
        M._cache["reciprocal_laplace"] = reciprocal_laplace(M.H, M.settings)
    return M._cache["reciprocal_laplace"]


def closed_form_derivatives(M: MixtureModel, x: float) -> TailDerivatives:
    """
    F-bar, f and f' for gamma-type scaling from M_k(theta) = E[S^-k e^{-theta/S}]:

        F-bar   = sum c x^k M_k
        F-bar'  = sum c (k x^(k-1) M_k - lambda x^k M_(k+1))
        F-bar'' = sum c (k(k-1) x^(k-2) M_k - 2 k lambda x^(k-1) M_(k+1) + lambda^2 x^k M_(k+2))
    """
    rl = _laplace(M)
    lx = math.log(x)
    tail, first, second = [], [], []
    for term in M.spectral.terms:
        lam = term.rate
        ll = math.log(lam)
        logm = [rl.log_moment(k, lam * x) for k in range(term.eta + 2)]
        for k, c in enumerate(term.coeffs):
            if c == 0:
                continue
            tail.append((c, k * lx + logm[k]))
            if k >= 1:
                first.append((c * k, (k - 1) * lx + logm[k]))
            first.append((-c, ll + k * lx + logm[k + 1]))
            if k >= 2:
                second.append((c * k * (k - 1), (k - 2) * lx + logm[k]))
            if k >= 1:
                second.append((-2.0 * c * k, ll + (k - 1) * lx + logm[k + 1]))
            second.append((c, 2.0 * ll + k * lx + logm[k + 2]))

    def signed(terms):
        b, a = zip(*terms)
        value, sign = logsumexp(np.asarray(a), b=np.asarray(b), return_sign=True)
        return float(sign), float(value)

    _, log_tail = signed(tail)
    first_sign, log_first = signed(first)
    second_sign, log_second = signed(second)
    if first_sign >= 0:
        raise DerivativeNoise(f"closed-form density is not positive at x={x:g}")
    return TailDerivatives(x=x, log_tail=log_tail, log_density=log_first,
                           slope_sign=-second_sign, log_abs_slope=log_second)


def finite_difference_derivatives(M: MixtureModel, x: float) -> TailDerivatives:
    """Central differences of F-bar with step h = x*1e-4, checked against the quadrature noise."""
    h = x * FD_STEP
    l0 = mixture_log_tail(M, x)
    rp = math.exp(mixture_log_tail(M, x + h) - l0)
    rm = math.exp(mixture_log_tail(M, x - h) - l0)
    density = -(rp - rm) / (2.0 * h)          # f / F-bar
    slope = -(rp - 2.0 + rm) / (h * h)        # f' / F-bar
    noise = 4.0 * M.settings.quadrature.tolerance / (h * h)
    if density <= 0 or slope == 0 or noise > NOISE_LIMIT * abs(slope):
        raise DerivativeNoise(f"finite differences at x={x:g} are dominated by quadrature noise "
                              f"(noise {noise:.2e}, slope {slope:.2e})")
    return TailDerivatives(x=x, log_tail=l0, log_density=l0 + math.log(density),
                           slope_sign=math.copysign(1.0, slope), log_abs_slope=l0 + math.log(abs(slope)))


def tail_derivatives(M: MixtureModel, x: float) -> TailDerivatives:
    """Best available F-bar, f, f' at x."""
    if _gamma_params(M.H) is not None:
        return closed_form_derivatives(M, x)
    try:
        return mixture_derivatives(M, x)
    except DerivativeNoise:
        raise
    except NumericalError as e:
        logger.info(f"Kernel quadrature failed at x={x:g} ({e}); using finite differences")
        return finite_difference_derivatives(M, x)


def derivative_table(M: MixtureModel, xs: Sequence[float], threads: int = None) -> List[TailDerivatives]:
    """tail_derivatives over xs; points that fail carry NaN fields and are logged."""
    threads = M.settings.threads if threads is None else threads

    def one(x):
        try:
            return tail_derivatives(M, float(x))
        except NumericalError as e:
            logger.warning(f"Derivatives unavailable at x={x:g}: {e}")
            nan = math.nan
            return TailDerivatives(x=float(x), log_tail=nan, log_density=nan, slope_sign=nan, log_abs_slope=nan)

    return grid_map(one, xs, threads)


def _von_mises(row: TailDerivatives) -> float:
    if math.isnan(row.log_tail) or math.isnan(row.log_abs_slope):
        return math.nan
    return row.von_mises_ratio


# ---------- Gumbel check ----------
def gumbel_check(M: MixtureModel, x_grid: Sequence[float] = None, table: List[TailDerivatives] = None) -> GumbelCheck:
    """
    Von Mises trace R(x) over the diagnostics grid and the resulting verdict.

    Regularly varying scaling skips the check with a Frechet verdict. Otherwise
    the verdict is Gumbel when the family has a theorem route and |R + 1|
    decreases over the last decade to below the policy tolerance.
    """
    policy = M.settings.diagnostics
    index = M.H.regular_variation_index
    if index is not None:
        return GumbelCheck(mda=Mda(MdaKind.FRECHET, index), skipped=True,
                           notes=[f"regularly varying scaling with index {index:g}; von Mises check skipped"])

    xs = np.asarray(x_grid if x_grid is not None else diagnostics_grid(policy), dtype=float)
    table = table if table is not None else derivative_table(M, xs)
    R = np.array([_von_mises(row) for row in table])
    notes = []
    if np.any(np.isnan(R)):
        notes.append(f"derivatives unavailable at {int(np.isnan(R).sum())} grid points")

    with np.errstate(divide="ignore", invalid="ignore"):
        trend = classify_trend(np.log(np.abs(R)), policy.run)
    trace = Trace("von_mises", xs, R, trend)

    route = theorem_route(M)
    deviation = np.abs(R + 1.0)
    last = xs >= xs[-1] / 10.0
    tail_dev = deviation[last]
    approaching = (
        tail_dev.size >= 2
        and not np.any(np.isnan(tail_dev))
        and np.all(np.diff(tail_dev) <= 1e-6 * tail_dev[:-1] + ROUNDING_FLOOR)
        and tail_dev[-1] < policy.gumbel_tol
    )
    if route is None:
        notes.append(f"no theorem route for {M.H.family} scaling; verdict left undetermined")
        mda = Mda(MdaKind.UNDETERMINED)
    elif not approaching:
        notes.append(f"|R+1| does not settle below {policy.gumbel_tol:g} over the last decade")
        mda = Mda(MdaKind.UNDETERMINED)
    else:
        mda = Mda(MdaKind.GUMBEL)
    logger.info(f"Gumbel check for {M.describe()}: {mda} (|R+1| at x={xs[-1]:g}: {deviation[-1]:.3g})")
    return GumbelCheck(mda=mda, trace=trace, theorem_route=route, notes=notes)


# ---------- subexponentiality ----------
def subexp_check(M: MixtureModel, t_grid: Sequence[float] = (2.0, 4.0, 9.0), x_grid: Sequence[float] = None,
                 table: List[TailDerivatives] = None) -> SubexpCheck:
    """
    Subexponential evidence: liminf a(tx)/a(x) > 1.

    The local index rho(x) = d log a / d log x is extrapolated linearly in
    1/log x over the last decade; t^rho is the limit estimate. Raw ratios
    a(tx)/a(x) inside the grid are kept as a cross-check.
    """
    policy = M.settings.diagnostics
    if any(t <= 1 for t in t_grid):
        raise ValueError("t values must exceed 1")
    analytic = {}
    rho_exact = AUXILIARY_EXPONENTS.get(M.H.family)
    if rho_exact is not None and not M.H.bounded:
        analytic = {float(t): float(t) ** rho_exact for t in t_grid}

    if M.H.bounded:
        return SubexpCheck(verdict=Subexponential.NO,
                           notes=["bounded scaling gives a light tail, which is never subexponential"])

    xs = np.asarray(x_grid if x_grid is not None else diagnostics_grid(policy), dtype=float)
    if table is None:
        table = derivative_table(M, xs)
    log_a = np.array([row.log_tail - row.log_density for row in table])
    ok = np.isfinite(log_a)
    xs, log_a = xs[ok], log_a[ok]
    notes = []
    if xs.size < 4:
        return SubexpCheck(verdict=Subexponential.UNDETERMINED, analytic=analytic,
                           notes=["too few grid points with a finite auxiliary function"])

    log_x = np.log(xs)
    rho = np.gradient(log_a, log_x)
    last = xs >= xs[-1] / 10.0
    slope, intercept = np.polyfit(1.0 / log_x[last], rho[last], 1)
    estimates = {float(t): float(t) ** float(intercept) for t in t_grid}

    raw = {}
    for t in t_grid:
        inside = xs * t <= xs[-1]
        if inside.sum() < 2:
            notes.append(f"t={t:g} exceeds the grid span; raw ratio unavailable")
            continue
        base = xs[inside]
        window = base >= base[-1] / 10.0
        shifted = np.interp(np.log(t * base[window]), log_x, log_a)
        raw[float(t)] = float(np.min(np.exp(shifted - log_a[inside][window])))

    threshold = 1.0 + policy.subexp_margin
    if all(v > threshold for v in estimates.values()) and all(v > 1.0 for v in raw.values()):
        verdict = Subexponential.YES
    else:
        verdict = Subexponential.UNDETERMINED
        notes.append(f"limit estimates do not all exceed {threshold:g}")
    logger.info(f"Subexponential check for {M.describe()}: {verdict.value}, rho={intercept:.4g}")
    return SubexpCheck(verdict=verdict, estimates=estimates, raw_minimum=raw, analytic=analytic, notes=notes)


# ---------- asymptotes ----------
def _dominant(spectral: SpectralForm):
    return spectral.dominant_rate, spectral.dominant_eta, spectral.gamma


def _calibrate(M: MixtureModel, log_shape, x: float = None) -> float:
    """log c such that c * shape matches F-bar at one large x."""
    x = x or M.settings.diagnostics.calibration_x or M.settings.diagnostics.x_hi
    return mixture_log_tail(M, x) - log_shape(x)


def gamma_asymptote(M: MixtureModel) -> AsymptoteForm:
    """
    Dominant term gamma x^(eta-1) M_(eta-1)(lambda x) for Gamma(a, b) scaling:

        F-bar(x) ~ C x^a' K_nu(b' sqrt(x)),  a' = eta-1 + nu/2, nu = a-eta+1, b' = 2 sqrt(b lambda)
    """
    a, b = _gamma_params(M.H)
    lam, eta, gamma = _dominant(M.spectral)
    nu = a - eta + 1
    log_pref = (math.log(2.0) + a * math.log(b) - special.gammaln(a) + 0.5 * nu * math.log(lam / b)
                + math.log(gamma))
    a_exp = eta - 1 + 0.5 * nu
    b_coef = 2.0 * math.sqrt(b * lam)

    def log_fn(x):
        return log_pref + a_exp * math.log(x) + log_bessel_k(nu, b_coef * math.sqrt(x))

    return AsymptoteForm(
        kind=AsymptoteKind.BESSEL_STRETCHED,
        constants={"c": math.exp(log_pref), "a": a_exp, "nu": nu, "b": b_coef, "d": 0.5,
                   "c_spectral": gamma * lam ** (eta - 1)},
        log_fn=log_fn,
    )


def exponential_bessel_asymptote(M: MixtureModel) -> AsymptoteForm:
    """Exponential scaling, the a = 1 case of gamma_asymptote."""
    if not isinstance(M.H, ExponentialScaler):
        raise ValueError("exponential scaling expected")
    return gamma_asymptote(M)


def geometric_asymptote(G: PhaseType, p: float, settings: Settings = None, calibrate_at: float = None,
                        spectral: SpectralForm = None) -> AsymptoteForm:
    """
    Geometric scaling p q^(i-1):

        F-bar(x) ~ 2 p c x^(eta-1) (|log q| / lambda x)^((eta-2)/2) K_(eta-2)(2 sqrt(lambda x |log q|))

    with c = gamma / q from replacing the sum over i by an integral. The
    constant actually reported is calibrated against the series at one large x.
    """
    H = GeometricScaler(p)
    M = build_mixture(G, H, settings)
    if spectral is not None:
        M._cache["spectral"] = spectral
    lam, eta, gamma = _dominant(M.spectral)
    lq = -H.log_q
    nu = eta - 2
    b_coef = 2.0 * math.sqrt(lam * lq)
    a_exp = 0.5 * eta
    log_scale = math.log(2.0 * p) + 0.5 * nu * math.log(lq / lam)

    def log_shape(x):
        return log_scale + a_exp * math.log(x) + log_bessel_k(nu, b_coef * math.sqrt(x))

    c_spectral = gamma / (1.0 - p)
    log_c = _calibrate(M, log_shape, calibrate_at)
    return AsymptoteForm(
        kind=AsymptoteKind.BESSEL_STRETCHED,
        constants={"c": math.exp(log_c), "c_spectral": c_spectral, "prefactor": math.exp(log_c + log_scale),
                   "a": a_exp, "nu": nu, "b": b_coef, "d": 0.5},
        log_fn=lambda x: log_c + log_shape(x),
        calibrated=True,
        notes=("constant c fitted to the series tail at one point",),
    )


def lognormal_asymptote(M: MixtureModel, calibrate_at: float = None) -> AsymptoteForm:
    """
    F-bar(x) ~ c x^(eta-1) lambda^(1-eta) M_(eta-1)(lambda x), with M_k taken from
    the Lambert W saddle point:

        M_k(theta) ~ L(theta) exp(-k omega_0 + sigma_0^2 k^2 / 2)
    """
    if not isinstance(M.H, LognormalScaler):
        raise ValueError("lognormal scaling expected")
    lam, eta, gamma = _dominant(M.spectral)
    rl = _laplace(M)
    k = eta - 1

    def log_shape(x):
        return k * math.log(x) - k * math.log(lam) + rl.asymptotic_log_moment(k, lam * x)

    log_c = _calibrate(M, log_shape, calibrate_at)
    return AsymptoteForm(
        kind=AsymptoteKind.LOGNORMAL_GUMBEL,
        constants={"c": math.exp(log_c), "c_spectral": gamma * lam ** k, "eta": eta, "lambda": lam},
        log_fn=lambda x: log_c + log_shape(x),
        calibrated=True,
        notes=("saddle-point shape; constant c fitted to the tail at one point",),
    )


def gumbel_asymptote(M: MixtureModel):
    """Closed-form asymptote for the Gumbel families that have one, else None."""
    if _gamma_params(M.H) is not None:
        return gamma_asymptote(M)
    if isinstance(M.H, LognormalScaler):
        return lognormal_asymptote(M)
    if isinstance(M.H, GeometricScaler):
        return geometric_asymptote(M.G, M.H.p, M.settings, spectral=M.spectral)
    return None
