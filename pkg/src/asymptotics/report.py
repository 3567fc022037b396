import logging
import math
from typing import Sequence

import numpy as np
from tqdm import tqdm

from ..errors import NumericalError
from ..mixture import MixtureModel
from ..scaling import ZipfScaler
from .classify import classify_tail, diagnostics_grid, exponential_moment_trace, mixture_log_tails, tail_ratio_trace
from .frechet import frechet_asymptote, norming_table, zipf_model_asymptote
from .gumbel import derivative_table, gumbel_asymptote, gumbel_check, subexp_check
from .models import Mda, MdaKind, MdaReport, Subexponential, TailClass

logger = logging.getLogger(__name__)

THETAS = (0.1, 1.0, 10.0)
NORMING_N = (1e2, 1e4, 1e6)
ZIPF_NORMING_NOTE = ("Zipf norming: c_n by inversion is (C n)^(1/(alpha-1)); "
                     "the displayed (C/n)^(1/(alpha-1)) form is reported alongside")


def model_asymptote(M: MixtureModel):
    """The closed-form tail asymptote the scaling family admits, or None."""
    if M.H.regular_variation_index is not None:
        return zipf_model_asymptote(M) if isinstance(M.H, ZipfScaler) else frechet_asymptote(M)
    return gumbel_asymptote(M)


def build_report(M: MixtureModel, thetas: Sequence[float] = THETAS, n_values: Sequence[float] = NORMING_N,
                 t_grid: Sequence[float] = (2.0, 4.0, 9.0), progress: bool = False) -> MdaReport:
    """
    Full domain-of-attraction report for one mixture.

    The verdicts come from the scaling family (bounded support, regular
    variation, a Gumbel theorem route); the traces are attached as evidence.
    """
    policy = M.settings.diagnostics
    threads = M.settings.threads
    xs = diagnostics_grid(policy)
    steps = tqdm(total=5, desc="mda", disable=not progress, leave=False)

    tail_class = classify_tail(M)
    notes = []
    table = derivative_table(M, xs, threads)
    log_tails = np.array([row.log_tail for row in table])
    missing = np.isnan(log_tails)
    if missing.any():
        log_tails[missing] = mixture_log_tails(M, xs[missing], threads)
    steps.update()

    diagnostics = [exponential_moment_trace(M, theta, xs, policy.run, log_tails=log_tails) for theta in thetas]
    if not M.H.bounded:
        diagnostics.append(tail_ratio_trace(M, M.H.log_tail, xs, policy.run,
                                            name="tail_ratio_scaler", log_tails=log_tails))
    steps.update()

    index = M.H.regular_variation_index
    asymptote = None
    norming = {}
    if index is not None:
        mda = Mda(MdaKind.FRECHET, index)
        asymptote = model_asymptote(M)
        if isinstance(M.H, ZipfScaler):
            notes.append(ZIPF_NORMING_NOTE)
        notes.extend(asymptote.notes)
        norming = norming_table(asymptote, n_values)
    else:
        check = gumbel_check(M, xs, table)
        mda = check.mda
        notes.extend(check.notes)
        if check.trace is not None:
            diagnostics.append(check.trace)
        try:
            asymptote = model_asymptote(M)
        except NumericalError as e:
            logger.warning(f"Gumbel asymptote unavailable: {e}")
            notes.append(f"asymptote unavailable: {e}")
    steps.update()

    if asymptote is not None:
        diagnostics.append(tail_ratio_trace(M, asymptote.log_value, xs, policy.run,
                                            name="tail_ratio_asymptote", log_tails=log_tails))
    steps.update()

    subexp = subexp_check(M, t_grid, xs, table)
    notes.extend(subexp.notes)
    steps.update()
    steps.close()

    if M.spectral.degenerate:
        notes.append("dominant spectral constant is not positive; asymptote constants are unreliable")
    if mda.kind is MdaKind.UNDETERMINED:
        logger.warning(f"Domain of attraction undetermined for {M.describe()}")

    report = MdaReport(
        tail_class=tail_class,
        mda=mda,
        asymptote=asymptote,
        norming=norming,
        diagnostics=diagnostics,
        subexponential=subexp.verdict if tail_class is TailClass.HEAVY else Subexponential.NO,
        subexp=subexp,
        notes=notes,
        model=M.to_dict(),
    )
    logger.info(f"Report for {M.describe()}: {report.tail_class.value}, {report.mda}")
    return report


def summary_rows(report: MdaReport):
    """(field, value) pairs for the human-readable summary table."""
    rows = [("tail_class", report.tail_class.value), ("mda", str(report.mda)),
            ("subexponential", report.subexponential.value)]
    if report.asymptote is not None:
        rows.append(("asymptote", report.asymptote.kind.value))
        rows.extend((f"asymptote.{k}", v) for k, v in report.asymptote.constants.items())
        if report.asymptote.calibrated:
            rows.append(("asymptote.calibrated", "yes"))
    for n, row in report.norming.items():
        rows.append((f"c_n (n={n})", row["c_n"]))
    for trace in report.diagnostics:
        prefix = "log " if trace.log_scale else ""
        rows.append((trace.name, f"{trace.trend.value} (last {prefix}{trace.values[-1]:.6g})"))
    rows.extend(("note", n) for n in report.notes)
    return [(k, v if isinstance(v, str) else f"{v:.10g}" if math.isfinite(v) else str(v)) for k, v in rows]
