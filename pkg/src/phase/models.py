from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
from scipy.special import logsumexp


@dataclass(frozen=True)
class PhaseType:
    """PH(beta, Lambda). Build through ph_validate, which also fills `exit`."""
    beta: np.ndarray
    Lambda: np.ndarray
    exit: np.ndarray

    @property
    def order(self) -> int:
        return len(self.beta)

    def to_dict(self) -> dict:
        return {"beta": self.beta.tolist(), "lambda": self.Lambda.tolist()}


class ExpPolyKernel:
    """
    Finite exponential polynomial K(y) = sum_j sum_k a[j, k] y^k exp(-rates[j] y).

    Tail, density and density derivative of a real-spectrum PH law are all of
    this shape; mixture integrals only ever need these three kernels.
    """

    def __init__(self, rates, coeffs):
        self.rates = np.asarray(rates, dtype=float)
        self.coeffs = np.atleast_2d(np.asarray(coeffs, dtype=float))
        if self.coeffs.shape[0] != len(self.rates):
            raise ValueError("one coefficient row per rate")
        self.powers = np.arange(self.coeffs.shape[1])

    def __repr__(self):
        return f"ExpPolyKernel(rates={self.rates.tolist()}, coeffs={self.coeffs.tolist()})"

    @property
    def dominant_rate(self) -> float:
        return float(self.rates.min())

    def derivative(self) -> "ExpPolyKernel":
        a = self.coeffs
        shifted = np.zeros_like(a)
        shifted[:, :-1] = a[:, 1:] * self.powers[1:]
        return ExpPolyKernel(self.rates, shifted - self.rates[:, None] * a)

    def _exponents(self, y, log_weight=0.0):
        y = np.asarray(y, dtype=float)[..., None, None]
        lw = np.asarray(log_weight, dtype=float)[..., None, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            logy = np.log(y)
            logpow = np.where(self.powers == 0, 0.0, self.powers * logy)
        return -self.rates[:, None] * y + logpow + lw

    def __call__(self, y):
        return self.scaled(y, 0.0)

    def scaled(self, y, log_weight):
        """K(y) * exp(log_weight) evaluated as one exponent per term."""
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            terms = self.coeffs * np.exp(self._exponents(y, log_weight))
        return np.sum(terms, axis=(-2, -1))

    def log_envelope(self, y):
        """log sum |a| y^k exp(-rate y), an upper profile of log|K(y)|."""
        e = self._exponents(y)
        b = np.broadcast_to(np.abs(self.coeffs), e.shape)
        with np.errstate(divide="ignore", invalid="ignore"):
            return logsumexp(e, axis=(-2, -1), b=b)

    def log_value(self, y):
        """log K(y) for kernels that are positive at y; nan where they are not."""
        e = self._exponents(y)
        b = np.broadcast_to(self.coeffs, e.shape)
        with np.errstate(divide="ignore", invalid="ignore"):
            out, sign = logsumexp(e, axis=(-2, -1), b=b, return_sign=True)
        return np.where(sign > 0, out, np.nan)

    def abs_bound(self) -> float:
        """sup over y >= 0 of |K(y)|, bounded termwise by the maxima of y^k e^{-rate y}."""
        k, r = self.powers[None, :], self.rates[:, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            peak = np.where(k == 0, 1.0, (k / r) ** k * np.exp(-k))
        return float(np.sum(np.abs(self.coeffs) * peak))


@dataclass(frozen=True)
class SpectralTerm:
    rate: float            # lambda_j > 0
    eta: int               # block size
    coeffs: Tuple[float, ...]


@dataclass(frozen=True)
class SpectralForm:
    """Tail expansion sum_j sum_k c_jk x^k exp(-lambda_j x)."""
    terms: Tuple[SpectralTerm, ...]
    dominant_rate: float
    dominant_eta: int
    gamma: float
    mu: float
    degenerate: bool = False
    cluster_tol: float = 1e-8
    max_residual: float = 0.0
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def tail_kernel(self) -> ExpPolyKernel:
        if "tail" not in self._cache:
            width = max(t.eta for t in self.terms)
            coeffs = np.zeros((len(self.terms), width + 1))
            for j, t in enumerate(self.terms):
                coeffs[j, :t.eta] = t.coeffs
            self._cache["tail"] = ExpPolyKernel([t.rate for t in self.terms], coeffs)
        return self._cache["tail"]

    def density_kernel(self) -> ExpPolyKernel:
        if "density" not in self._cache:
            tail = self.tail_kernel().derivative()
            self._cache["density"] = ExpPolyKernel(tail.rates, -tail.coeffs)
        return self._cache["density"]

    def density_derivative_kernel(self) -> ExpPolyKernel:
        if "density_derivative" not in self._cache:
            self._cache["density_derivative"] = self.density_kernel().derivative()
        return self._cache["density_derivative"]

    def kernel(self, order: int) -> ExpPolyKernel:
        """0 -> tail, 1 -> density, 2 -> density derivative."""
        return (self.tail_kernel, self.density_kernel, self.density_derivative_kernel)[order]()

    def tail(self, x):
        return self.tail_kernel()(x)

    def to_dict(self) -> dict:
        return {
            "terms": [{"lambda": t.rate, "eta": t.eta, "coeffs": list(t.coeffs)} for t in self.terms],
            "dominant": {"lambda": self.dominant_rate, "eta": self.dominant_eta,
                         "gamma": self.gamma, "mu": self.mu},
            "degenerate": self.degenerate,
        }
