import logging
import math

from scipy import optimize, special

from ..errors import DomainError, NotFrechet, NotRegularlyVarying
from ..mixture import MixtureModel
from ..phase import PhaseType, SpectralForm, ph_spectral
from ..scaling import ParetoScaler, ZipfScaler
from ..special import riemann_zeta
from .models import AsymptoteForm, AsymptoteKind, MdaKind, MdaReport

logger = logging.getLogger(__name__)

TAUBERIAN_NOTE = "index <= 1 lies outside the range where the regular-variation equivalence is proven"


def spectral_moment(spectral: SpectralForm, alpha: float) -> float:
    """M_G(alpha) = sum_jk c_jk alpha Gamma(alpha + k) / lambda_j^(alpha + k)."""
    total = 0.0
    for term in spectral.terms:
        for k, c in enumerate(term.coeffs):
            total += c * alpha * math.exp(special.gammaln(alpha + k) - (alpha + k) * math.log(term.rate))
    return total


def frechet_asymptote(M: MixtureModel, alpha: float = None) -> AsymptoteForm:
    """
    Breiman asymptote F-bar(x) ~ M_G(alpha) H-bar(x) for regularly varying H.

    Pareto scaling gives the exact power C x^-alpha; Zipf scaling keeps the
    Zipf tail itself as the reference.
    """
    index = M.H.regular_variation_index
    if index is None:
        raise NotRegularlyVarying(f"{M.H.describe()} is not regularly varying")
    if alpha is not None and not math.isclose(alpha, index, rel_tol=1e-12):
        raise NotRegularlyVarying(f"{M.H.describe()} has index {index:g}, not {alpha:g}")

    moment = spectral_moment(M.spectral, index)
    notes = (TAUBERIAN_NOTE,) if index <= 1 else ()
    if isinstance(M.H, ParetoScaler):
        log_c = math.log(moment)
        return AsymptoteForm(
            kind=AsymptoteKind.PARETO_EXACT,
            constants={"C": moment, "alpha": index},
            log_fn=lambda x: log_c - index * math.log(x),
            notes=notes,
        )

    H = M.H
    log_m = math.log(moment)
    return AsymptoteForm(
        kind=AsymptoteKind.BREIMAN_POWER,
        constants={"M": moment, "alpha": index},
        log_fn=lambda x: log_m + float(H.log_tail(x)),
        notes=notes,
    )


def zipf_asymptote(G: PhaseType, alpha: float, spectral: SpectralForm = None) -> AsymptoteForm:
    """C x^-(alpha-1) with C = sum_jk c_jk Gamma(alpha+k-1) / (zeta(alpha) lambda_j^(alpha+k-1))."""
    if alpha < 2:
        raise DomainError(f"zipf scaling needs alpha >= 2, got {alpha}")
    spectral = spectral or ph_spectral(G)
    zeta = riemann_zeta(alpha)
    C = 0.0
    for term in spectral.terms:
        for k, c in enumerate(term.coeffs):
            C += c * math.exp(special.gammaln(alpha + k - 1) - (alpha + k - 1) * math.log(term.rate))
    C /= zeta
    index = alpha - 1
    log_c = math.log(C)
    return AsymptoteForm(
        kind=AsymptoteKind.ZIPF_POWER,
        constants={"C": C, "alpha": index},
        log_fn=lambda x: log_c - index * math.log(x),
    )


def invert_asymptote(asymptote: AsymptoteForm, n: float) -> float:
    """Smallest x with asymptote(x) <= 1/n, by root finding on log x."""
    target = -math.log(n)

    def h(u):
        return asymptote.log_value(math.exp(u)) - target

    lo, hi = -10.0, 10.0
    while h(lo) < 0 and lo > -700:
        lo -= 20.0
    while h(hi) > 0 and hi < 700:
        hi += 20.0
    if h(lo) < 0 or h(hi) > 0:
        raise NotFrechet(f"asymptote does not cross 1/{n:g}")
    return math.exp(optimize.brentq(h, lo, hi, xtol=1e-14, rtol=1e-14))


def norming_constants(report: MdaReport, n: float):
    """(c_n, d_n) for normalised maxima in the Frechet case; d_n = 0."""
    if report.mda.kind is not MdaKind.FRECHET or report.asymptote is None:
        raise NotFrechet(f"norming constants need a Frechet domain with an asymptote, got {report.mda}")
    if n <= 1:
        raise DomainError(f"n must exceed 1, got {n}")
    return invert_asymptote(report.asymptote, n), 0.0


def norming_table(asymptote: AsymptoteForm, n_values=(1e2, 1e4, 1e6)) -> dict:
    """c_n by inversion for each n; power laws also carry the closed forms."""
    table = {}
    alpha = asymptote.constants.get("alpha")
    C = asymptote.constants.get("C")
    for n in n_values:
        row = {"c_n": invert_asymptote(asymptote, n), "d_n": 0.0}
        if C is not None and alpha:
            row["c_n_inversion_closed_form"] = (C * n) ** (1.0 / alpha)
            if asymptote.kind is AsymptoteKind.ZIPF_POWER:
                row["c_n_displayed_form"] = (C / n) ** (1.0 / alpha)
        table[f"{n:g}"] = row
    return table


def zipf_model_asymptote(M: MixtureModel) -> AsymptoteForm:
    if not isinstance(M.H, ZipfScaler):
        raise NotRegularlyVarying(f"{M.H.describe()} is not a Zipf law")
    return zipf_asymptote(M.G, M.H.alpha, M.spectral)
