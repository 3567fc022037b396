"""
Spectral tail expansion of a PH law with real spectrum.

Each eigenvalue cluster mu_j of Lambda spans an invariant subspace V_j with
left basis W_j (rows of V^-1). On it Lambda acts as mu_j I + N_j with N_j
nilpotent, so

    beta exp(Lambda x) e = sum_j exp(mu_j x) sum_k x^k/k! beta V_j N_j^k W_j e.

V_j N_j^k W_j are the Laurent coefficients of the resolvent (theta I - Lambda)^-1
at mu_j, i.e. the partial-fraction residues of the Laplace transform.
"""
import logging
import math
from dataclasses import replace

import numpy as np
from scipy import linalg

from ..config import SpectralPolicy
from ..errors import ComplexSpectrum, DefectiveDecompositionFailure
from .models import PhaseType, SpectralForm, SpectralTerm
from .phase_type import ph_tail

logger = logging.getLogger(__name__)

NEGLIGIBLE_COEFF = 1e-12
CHECK_POINTS = 41


class _Inconsistent(Exception):
    pass


def _clusters(eigenvalues: np.ndarray, tol: float):
    order = np.argsort(-eigenvalues.real)  # slowest decay first
    groups = []
    for e in eigenvalues[order]:
        if groups and abs(e - groups[-1][0]) <= tol * max(abs(e), abs(groups[-1][0])):
            groups[-1].append(e)
        else:
            groups.append([e])
    return groups


def _decompose(G: PhaseType, eigenvalues: np.ndarray, tol: float, policy: SpectralPolicy):
    p = G.order
    blocks = []
    for group in _clusters(eigenvalues, tol):
        mu = complex(np.mean(group))
        if abs(mu.imag) > tol * abs(mu):
            raise _Inconsistent(f"cluster at {mu:.6g} is not real")
        mu = mu.real
        a = len(group)
        shifted = G.Lambda - mu * np.eye(p)
        V = linalg.null_space(np.linalg.matrix_power(shifted, a), rcond=policy.rank_tol)
        if V.shape[1] != a:
            raise _Inconsistent(f"invariant subspace at {mu:.6g} has dimension {V.shape[1]}, expected {a}")
        blocks.append((mu, a, V))

    V = np.hstack([b[2] for b in blocks])
    if np.linalg.cond(V) > 1.0 / policy.rank_tol:
        raise _Inconsistent("invariant subspaces are nearly dependent")
    W = np.linalg.inv(V)

    terms = []
    col = 0
    ones = np.ones(p)
    for mu, a, Vj in blocks:
        Wj = W[col:col + a]
        col += a
        N = Wj @ G.Lambda @ Vj - mu * np.eye(a)
        left, right = G.beta @ Vj, Wj @ ones
        coeffs = []
        power = np.eye(a)
        for k in range(a):
            coeffs.append(float(left @ power @ right) / math.factorial(k))
            power = power @ N
        coeffs = np.asarray(coeffs)

        # trailing powers that beta never excites do not belong to the tail
        live = np.nonzero(np.abs(coeffs) > NEGLIGIBLE_COEFF)[0]
        if live.size == 0:
            logger.debug(f"Dropping cluster at rate {-mu:.6g}: no weight under beta")
            continue
        eta = int(live[-1]) + 1
        if eta > 1 and np.linalg.norm(np.linalg.matrix_power(N, eta - 1)) <= policy.rank_tol * max(1.0, abs(mu)) ** (eta - 1):
            raise _Inconsistent(f"block at {mu:.6g} claims order {eta} but N^{eta - 1} vanishes")
        terms.append(SpectralTerm(rate=-mu, eta=eta, coeffs=tuple(coeffs[:eta].tolist())))
    if not terms:
        raise _Inconsistent("no cluster carries weight")
    return terms


def _build(terms, tol) -> SpectralForm:
    dominant = min(terms, key=lambda t: t.rate)
    gamma = dominant.coeffs[dominant.eta - 1]
    degenerate = gamma <= 0
    if degenerate:
        logger.warning(f"Dominant tail constant is non-positive ({gamma:.6g}); asymptotics are degenerate")
    return SpectralForm(
        terms=tuple(sorted(terms, key=lambda t: t.rate)),
        dominant_rate=dominant.rate,
        dominant_eta=dominant.eta,
        gamma=gamma,
        mu=dominant.rate * gamma,
        degenerate=degenerate,
        cluster_tol=tol,
    )


def _residual(G: PhaseType, form: SpectralForm) -> float:
    x = np.linspace(0.0, 20.0 / form.dominant_rate, CHECK_POINTS)
    exact = ph_tail(G, x)
    return float(np.max(np.abs(form.tail(x) - exact) / np.maximum(np.abs(exact), np.finfo(float).tiny)))


def ph_spectral(G: PhaseType, policy: SpectralPolicy = SpectralPolicy()) -> SpectralForm:
    eigenvalues = linalg.eigvals(G.Lambda)
    scale = float(np.max(np.abs(eigenvalues)))
    if np.any(np.abs(eigenvalues.imag) > policy.fallback_cluster_tol * scale):
        worst = eigenvalues[np.argmax(np.abs(eigenvalues.imag))]
        raise ComplexSpectrum(f"eigenvalue {worst:.6g} of Lambda is not real")

    failure = None
    for tol in (policy.cluster_tol, policy.fallback_cluster_tol):
        try:
            form = _build(_decompose(G, eigenvalues, tol, policy), tol)
        except (_Inconsistent, np.linalg.LinAlgError) as e:
            failure = str(e)
            logger.debug(f"Spectral decomposition at cluster tolerance {tol:g} failed: {e}")
            continue
        residual = _residual(G, form)
        if residual <= policy.check_tol:
            logger.debug(f"Spectral form with {len(form.terms)} terms, residual {residual:.2e}")
            return replace(form, max_residual=residual)
        failure = f"reconstruction residual {residual:.2e} exceeds {policy.check_tol:g}"
        logger.debug(f"Cluster tolerance {tol:g}: {failure}")

    raise DefectiveDecompositionFailure(failure)
