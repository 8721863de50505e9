"""Tilt-angle sensing with two-photon interference.

Simulation and estimation toolkit for optical tilt sensing: a
Hong-Ou-Mandel coincidence interferometer whose signal survives
path-length fluctuations, next to the single-photon Sagnac and
weak-value-amplification baselines that do not.
"""

from .errors import (ConfigError, HomsenseError, NumericError,
                     PostSelectionError, RegimeError,
                     SingularInformationError, ValidityError)
from .kernels import BACKEND
from .optics import BiphotonAmplitude, OpticalParams

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BiphotonAmplitude",
    "ConfigError",
    "HomsenseError",
    "NumericError",
    "OpticalParams",
    "PostSelectionError",
    "RegimeError",
    "SingularInformationError",
    "ValidityError",
    "__version__",
]
