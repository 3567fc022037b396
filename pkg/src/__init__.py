"""
phasemix
Phase-type scale mixtures: tails, densities, moments, sampling and
extreme-value asymptotics of S*Y with Y phase-type.
"""

__version__ = "1.0.0"
__description__ = "Phase-type scale mixtures and their tail asymptotics"

from .main import main, run, RunConfig

__all__ = ['main', 'run', 'RunConfig']
