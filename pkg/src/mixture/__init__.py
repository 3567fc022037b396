"""
Phase-type scale mixtures: tail, density, moments and sampling of S*Y, plus
the integral bracketing of discrete mixture series.
"""

from .mixture import (
    build_mixture,
    mixture_density,
    mixture_derivatives,
    mixture_log_density,
    mixture_log_tail,
    mixture_moment,
    mixture_sample,
    mixture_tail,
)
from .models import MixtureModel, SeriesBounds, TailDerivatives
from .series import series_bounds

__all__ = [
    'MixtureModel', 'SeriesBounds', 'TailDerivatives', 'build_mixture', 'mixture_density',
    'mixture_derivatives', 'mixture_log_density', 'mixture_log_tail', 'mixture_moment',
    'mixture_sample', 'mixture_tail', 'series_bounds',
]
