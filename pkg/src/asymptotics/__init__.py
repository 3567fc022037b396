"""
Tail classification, domains of attraction, closed-form asymptotes, norming
constants and the numeric diagnostics that back them.
"""

from .classify import (
    classify_general_mixture,
    classify_tail,
    classify_trend,
    diagnostics_grid,
    exponential_moment_trace,
    geometric_grid,
    grid_map,
    mixture_log_tails,
    tail_ratio_trace,
    weibull_condition,
    weibull_gamma,
    weibull_product_tail,
)
from .frechet import (
    frechet_asymptote,
    invert_asymptote,
    norming_constants,
    norming_table,
    spectral_moment,
    zipf_asymptote,
)
from .gumbel import (
    derivative_table,
    exponential_bessel_asymptote,
    gamma_asymptote,
    geometric_asymptote,
    gumbel_asymptote,
    gumbel_check,
    lognormal_asymptote,
    subexp_check,
    tail_derivatives,
)
from .models import (
    AsymptoteForm,
    AsymptoteKind,
    GeneralMixtureEvidence,
    GumbelCheck,
    Mda,
    MdaKind,
    MdaReport,
    SubexpCheck,
    Subexponential,
    TailClass,
    Trace,
    Trend,
)
from .report import build_report, model_asymptote, summary_rows

__all__ = [
    'AsymptoteForm', 'AsymptoteKind', 'GeneralMixtureEvidence', 'GumbelCheck', 'Mda', 'MdaKind', 'MdaReport',
    'SubexpCheck', 'Subexponential', 'TailClass', 'Trace', 'Trend', 'build_report', 'classify_general_mixture',
    'classify_tail', 'classify_trend', 'derivative_table', 'diagnostics_grid', 'exponential_bessel_asymptote',
    'exponential_moment_trace', 'frechet_asymptote', 'gamma_asymptote', 'geometric_asymptote', 'geometric_grid', 'grid_map',
    'gumbel_asymptote', 'gumbel_check', 'invert_asymptote', 'lognormal_asymptote', 'mixture_log_tails', 'model_asymptote',
    'norming_constants', 'norming_table', 'spectral_moment', 'subexp_check', 'summary_rows', 'tail_derivatives',
    'tail_ratio_trace', 'weibull_condition', 'weibull_gamma', 'weibull_product_tail', 'zipf_asymptote',
]
