import logging
import math

import numpy as np
from scipy import integrate, linalg

from ..errors import MatexpFailure, NonStochasticInitial, NotSubIntensity, QuadratureNonconvergence, SingularMatrix

from .models import PhaseType

logger = logging.getLogger(__name__)

STOCHASTIC_TOL = 1e-10
SAMPLE_CHUNK = 1_000_000


def ph_validate(beta, Lambda) -> PhaseType:
    beta = np.array(beta, dtype=float)
    Lambda = np.atleast_2d(np.array(Lambda, dtype=float))

    if beta.ndim != 1 or Lambda.shape != (len(beta), len(beta)):
        raise NotSubIntensity(
            f"dimension mismatch: beta has length {beta.size}, Lambda has shape {Lambda.shape}"
        )
    if not (np.all(np.isfinite(beta)) and np.all(np.isfinite(Lambda))):
        raise NotSubIntensity("entries must be finite")

    if np.any(beta < -STOCHASTIC_TOL):
        raise NonStochasticInitial(f"negative entries in beta: {beta.tolist()}")
    if abs(beta.sum() - 1.0) > STOCHASTIC_TOL:
        raise NonStochasticInitial(f"beta sums to {beta.sum():.12g}, expected 1")

    diag = np.diag(Lambda)
    if np.any(diag >= 0):
        i = int(np.argmax(diag >= 0))
        raise NotSubIntensity(f"Lambda[{i}][{i}] = {diag[i]:g} must be negative")
    off = Lambda - np.diag(diag)
    if np.any(off < 0):
        i, j = np.argwhere(off < 0)[0]
        raise NotSubIntensity(f"Lambda[{i}][{j}] = {Lambda[i, j]:g} must be nonnegative")

    exit_vector = -Lambda.sum(axis=1)
    scale = np.abs(diag)
    if np.any(exit_vector < -STOCHASTIC_TOL * scale):
        i = int(np.argmin(exit_vector))
        raise NotSubIntensity(f"row {i} of Lambda sums to {-exit_vector[i]:g} > 0")
    exit_vector = np.where(exit_vector < STOCHASTIC_TOL * scale, 0.0, exit_vector)
    if not np.any(exit_vector > 0):
        raise NotSubIntensity("no row of Lambda has a negative sum; absorption is impossible")

    # every phase must drain into absorption, otherwise Lambda is singular
    reach = exit_vector > 0
    adjacency = off > 0
    while True:
        grown = reach | np.any(adjacency & reach[None, :], axis=1)
        if np.array_equal(grown, reach):
            break
        reach = grown
    if not np.all(reach):
        stuck = np.nonzero(~reach)[0].tolist()
        raise NotSubIntensity(f"phases {stuck} can never reach absorption")

    beta = np.clip(beta, 0.0, None)
    for arr in (beta, Lambda, exit_vector):
        arr.setflags(write=False)
    return PhaseType(beta=beta, Lambda=Lambda, exit=exit_vector)


def _expm_batch(G: PhaseType, x) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x < 0):
        raise ValueError("x must be nonnegative")
    try:
        E = linalg.expm(G.Lambda[None, :, :] * x[:, None, None])
    except (ValueError, np.linalg.LinAlgError, OverflowError) as e:
        raise MatexpFailure(f"matrix exponential failed: {e}") from e
    if not np.all(np.isfinite(E)):
        raise MatexpFailure("matrix exponential produced non-finite entries")
    return E


def _unwrap(values, x):
    return float(values[0]) if np.ndim(x) == 0 else values


def ph_tail(G: PhaseType, x):
    """G-bar(x) = beta exp(Lambda x) e, for scalar or array x."""
    E = _expm_batch(G, x)
    values = np.clip(E.sum(axis=2) @ G.beta, 0.0, 1.0)
    if np.ndim(x) == 0 and x == 0:
        return 1.0
    return _unwrap(values, x)


def ph_density(G: PhaseType, x):
    """g(x) = beta exp(Lambda x) lambda."""
    E = _expm_batch(G, x)
    values = np.clip((E @ G.exit) @ G.beta, 0.0, None)
    return _unwrap(values, x)


def ph_cdf(G: PhaseType, x):
    return 1.0 - ph_tail(G, x)


def ph_moment(G: PhaseType, n: int, s: float = 1.0) -> float:
    """n-th raw moment of s*Y: s^n (-1)^n n! beta Lambda^{-n} e."""
    if n < 1 or int(n) != n:
        raise ValueError("moment order must be a positive integer")
    if s <= 0:
        raise ValueError("scale must be positive")
    lu = linalg.lu_factor(G.Lambda)
    if np.any(np.abs(np.diag(lu[0])) < np.finfo(float).eps * np.abs(G.Lambda).max()):
        raise SingularMatrix("Lambda is numerically singular")

    v = np.ones(G.order)
    for _ in range(int(n)):
        v = -linalg.lu_solve(lu, v)
    value = float(s ** n * math.factorial(int(n)) * (G.beta @ v))
    if not np.isfinite(value) or value <= 0:
        raise SingularMatrix(f"moment of order {n} evaluated to {value}")
    return value


def ph_fractional_moment(G: PhaseType, alpha: float, tolerance: float = 1e-11) -> float:
    """int_0^inf x^alpha g(x) dx by adaptive quadrature, split at the mean."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    mean = ph_moment(G, 1)

    def integrand(x):
        return x ** alpha * ph_density(G, x)

    total = 0.0
    for a, b in ((0.0, mean), (mean, np.inf)):
        out = integrate.quad(integrand, a, b, epsabs=0.0, epsrel=tolerance, limit=200, full_output=1)
        if len(out) > 3 and out[1] > 1e-8 * max(abs(out[0]), 1e-300):
            raise QuadratureNonconvergence(f"fractional moment of order {alpha} on [{a}, {b}]: {out[3]}")
        total += out[0]
    logger.debug(f"Fractional moment alpha={alpha}: {total:.12g}")
    return total


def ph_sample(G: PhaseType, rng_seed, count: int) -> np.ndarray:
    """Absorption times of the underlying Markov jump process."""
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)

    p = G.order
    rates = -np.diag(G.Lambda)
    jump = np.zeros((p, p + 1))
    jump[:, :p] = G.Lambda / rates[:, None]
    np.fill_diagonal(jump[:, :p], 0.0)
    jump[:, p] = G.exit / rates
    cumulative = np.cumsum(jump, axis=1)
    cumulative[:, -1] = 1.0

    out = np.empty(count)
    for start in range(0, count, SAMPLE_CHUNK):
        n = min(SAMPLE_CHUNK, count - start)
        state = rng.choice(p, size=n, p=G.beta)
        time = np.zeros(n)
        active = np.arange(n)
        while active.size:
            s = state[active]
            time[active] += rng.exponential(1.0 / rates[s])
            u = rng.random(active.size)
            nxt = np.argmax(u[:, None] < cumulative[s], axis=1)
            absorbed = nxt == p
            state[active] = np.where(absorbed, 0, nxt)
            active = active[~absorbed]
        out[start:start + n] = time
    return out
