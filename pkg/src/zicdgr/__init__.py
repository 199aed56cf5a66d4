"""Diversity gain region of the Rayleigh-fading Z-interference channel."""

from .model import (
    DiversityPair,
    GammaTriple,
    OperatingPoint,
    ParameterError,
    SplitParams,
    exponent_weight,
    plus,
)

__version__ = "0.1.0"

__all__ = [
    "DiversityPair",
    "GammaTriple",
    "OperatingPoint",
    "ParameterError",
    "SplitParams",
    "exponent_weight",
    "plus",
    "__version__",
]
