"""
Scaling distributions H of the multiplier S, their reciprocal Laplace
transforms and expectations against them.
"""

from .integrals import expectation, scale_integral
from .laplace import ReciprocalLaplace, reciprocal_laplace, reciprocal_moment, scaler_laplace
from .models import (
    Availability,
    ContinuousScaler,
    DiscreteScaler,
    ExponentialScaler,
    FiniteDiscreteScaler,
    GammaScaler,
    GeometricScaler,
    Kind,
    LognormalScaler,
    ParetoScaler,
    PointMassScaler,
    Scaler,
    WeibullScaler,
    ZipfScaler,
)
from .scalers import FAMILIES, make_scaler, scaler_log_tail, scaler_moment, scaler_sample, scaler_tail

__all__ = [
    'Availability', 'ContinuousScaler', 'DiscreteScaler', 'ExponentialScaler', 'FiniteDiscreteScaler',
    'GammaScaler', 'GeometricScaler', 'Kind', 'LognormalScaler', 'ParetoScaler', 'PointMassScaler',
    'Scaler', 'WeibullScaler', 'ZipfScaler', 'FAMILIES', 'ReciprocalLaplace', 'expectation',
    'make_scaler', 'reciprocal_laplace', 'reciprocal_moment', 'scale_integral', 'scaler_laplace',
    'scaler_log_tail', 'scaler_moment', 'scaler_sample', 'scaler_tail',
]
