"""Domain types and the exponent-domain probability model.

Every quantity here is an SNR exponent: multiplexing gains ``r1, r2``, the
interference level ``beta``, the common-message gain ``t2``, the power-split
exponent ``b`` and the channel exponents ``gamma_ij`` defined through
``|h_ij|^2 = SNR^-gamma_ij``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ParameterError",
    "OperatingPoint",
    "SplitParams",
    "GammaTriple",
    "DiversityPair",
    "plus",
    "exponent_weight",
    "b_max",
]

# slack for float round-off when checking closed parameter ranges
RANGE_SLACK = 1e-12


class ParameterError(ValueError):
    """Raised when a domain value lies outside its valid range."""


def _check_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ParameterError(f"{name} must be finite, got {value!r}")
    return value


def plus(x):
    """Return ``max(x, 0)``; works elementwise on arrays."""
    if isinstance(x, np.ndarray):
        return np.maximum(x, 0.0)
    return x if x > 0.0 else 0.0


@dataclass(frozen=True)
class OperatingPoint:
    """Multiplexing pair ``(r1, r2)`` and interference exponent ``beta``."""

    r1: float
    r2: float
    beta: float

    def __post_init__(self) -> None:
        for name in ("r1", "r2", "beta"):
            object.__setattr__(self, name, _check_finite(name, getattr(self, name)))
        if not 0.0 <= self.r1 <= 1.0:
            raise ParameterError(f"r1 must lie in [0, 1], got {self.r1}")
        if not 0.0 <= self.r2 <= 1.0:
            raise ParameterError(f"r2 must lie in [0, 1], got {self.r2}")
        if self.beta < 0.0:
            raise ParameterError(f"beta must be >= 0, got {self.beta}")

    def as_dict(self) -> dict:
        return {"r1": self.r1, "r2": self.r2, "beta": self.beta}


@dataclass(frozen=True)
class SplitParams:
    """Han-Kobayashi rate/power split at TX2, bound to one operating point.

    Args:
        op: The operating point whose ``r2`` bounds ``t2``.
        t2: Multiplexing gain of the common message, ``0 <= t2 <= r2``.
        b: Power-split exponent; the private message gets the fraction
            ``1 / (1 + SNR^b)`` of TX2's power.
    """

    op: OperatingPoint
    t2: float
    b: float

    def __post_init__(self) -> None:
        t2 = _check_finite("t2", self.t2)
        b = _check_finite("b", self.b)
        if t2 < -RANGE_SLACK or t2 > self.op.r2 + RANGE_SLACK:
            raise ParameterError(f"t2 must lie in [0, r2={self.op.r2}], got {t2}")
        if b < -RANGE_SLACK:
            raise ParameterError(f"b must be >= 0, got {b}")
        object.__setattr__(self, "t2", min(max(t2, 0.0), self.op.r2))
        object.__setattr__(self, "b", max(b, 0.0))

    @property
    def s2(self) -> float:
        """Private-message multiplexing gain ``r2 - t2``."""
        return max(self.op.r2 - self.t2, 0.0)


@dataclass(frozen=True)
class GammaTriple:
    """Channel exponents ``(gamma_11, gamma_21, gamma_22)``, all nonnegative."""

    g11: float
    g21: float
    g22: float

    def __post_init__(self) -> None:
        for name in ("g11", "g21", "g22"):
            value = float(getattr(self, name))
            if math.isnan(value) or value < 0.0:
                raise ParameterError(f"{name} must be >= 0, got {value}")
            object.__setattr__(self, name, value)

    def as_array(self) -> np.ndarray:
        return np.array([self.g11, self.g21, self.g22])


@dataclass(frozen=True)
class DiversityPair:
    """Per-receiver diversity exponents.

    ``d1`` may exceed 1 (up to ``1 + beta``) because RX1 sees two fading links.
    """

    d1: float
    d2: float
    extra: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        for name in ("d1", "d2"):
            value = float(getattr(self, name))
            if math.isnan(value) or value < 0.0:
                raise ParameterError(f"{name} must be >= 0, got {value}")
            object.__setattr__(self, name, value)
        if self.d2 > 1.0 + RANGE_SLACK and math.isfinite(self.d2):
            raise ParameterError(f"d2 must be <= 1, got {self.d2}")

    def as_tuple(self) -> tuple[float, float]:
        return (self.d1, self.d2)


def exponent_weight(g: GammaTriple) -> float:
    """Exponential cost ``gamma_11 + gamma_21 + gamma_22`` of a channel state.

    The outage probability of a set behaves like ``SNR^-d`` where ``d`` is the
    infimum of this weight over the set.
    """
    return g.g11 + g.g21 + g.g22


def b_max(op: OperatingPoint) -> float:
    """Upper end of the ``b`` range worth sweeping.

    Beyond ``beta`` every interference term in the RX1 diversities saturates
    and RX2's private-message diversity only shrinks with ``b``.
    """
    return op.beta + op.r1 + op.r2 + 1.0
