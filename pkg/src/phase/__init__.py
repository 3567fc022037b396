"""
Finite phase-type distributions: validation, evaluation, moments, sampling
and the spectral tail expansion.
"""

from .models import ExpPolyKernel, PhaseType, SpectralForm, SpectralTerm
from .phase_type import (
    ph_cdf,
    ph_density,
    ph_fractional_moment,
    ph_moment,
    ph_sample,
    ph_tail,
    ph_validate,
)
from .spectral import ph_spectral

__all__ = [
    'ExpPolyKernel', 'PhaseType', 'SpectralForm', 'SpectralTerm',
    'ph_cdf', 'ph_density', 'ph_fractional_moment', 'ph_moment', 'ph_sample',
    'ph_spectral', 'ph_tail', 'ph_validate',
]
