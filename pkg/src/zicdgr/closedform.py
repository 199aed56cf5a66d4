"""Closed-form diversity exponents for the fixed-split and special schemes."""

from __future__ import annotations

from dataclasses import dataclass

from .model import DiversityPair, OperatingPoint, ParameterError, SplitParams, plus
from .regions import MixedParams

__all__ = [
    "HkDiversityBreakdown",
    "hk_diversity",
    "cmo_diversity",
    "tian_diversity",
    "envelope_diversity",
    "mixed_upper_bounds",
]


@dataclass(frozen=True)
class HkDiversityBreakdown:
    """Per-event HK diversities; ``d1``/``d2`` are the receiver minima."""

    d11: float
    d12: float
    d21: float
    d22: float

    @property
    def d1(self) -> float:
        return min(self.d11, self.d12)

    @property
    def d2(self) -> float:
        return min(self.d21, self.d22)

    def pair(self) -> DiversityPair:
        return DiversityPair(self.d1, self.d2)

    def as_dict(self) -> dict:
        return {
            "d11": self.d11, "d12": self.d12, "d1": self.d1,
            "d21": self.d21, "d22": self.d22, "d2": self.d2,
        }


def hk_d1_parts(r1: float, beta: float, t2: float, b: float) -> tuple[float, float]:
    """``(d11, d12)`` from raw floats; shared by the sweeps."""
    c = r1 + t2
    d11 = plus(1.0 - r1 - plus(beta - b))
    if b >= c:
        d12 = plus(1.0 - c) + plus(beta - c)
    else:
        d12 = plus(1.0 - c - plus(beta - b))
    return d11, d12


def hk_diversity(op: OperatingPoint, sp: SplitParams) -> HkDiversityBreakdown:
    """Diversities of the fixed-split HK scheme.

    Examples:
        >>> op = OperatingPoint(0.2, 0.3, 0.4)
        >>> hk_diversity(op, SplitParams(op, 0.1, 0.5)).as_dict()["d22"]
        0.3
    """
    d11, d12 = hk_d1_parts(op.r1, op.beta, sp.t2, sp.b)
    d21 = plus(1.0 - op.r2)
    # 1 - (r2 - t2) - b, grouped so round-off matches the event form
    d22 = plus(1.0 - sp.b - sp.s2)
    return HkDiversityBreakdown(d11, d12, d21, d22)


def cmo_diversity(op: OperatingPoint) -> DiversityPair:
    """Diversities when TX2 sends a common message only."""
    s = op.r1 + op.r2
    d1 = min(plus(1.0 - op.r1), plus(1.0 - s) + plus(op.beta - s))
    return DiversityPair(d1, plus(1.0 - op.r2))


def tian_diversity(op: OperatingPoint) -> DiversityPair:
    """Diversities when RX1 treats the interference as noise."""
    return DiversityPair(plus(1.0 - op.r1 - op.beta), plus(1.0 - op.r2))


def envelope_diversity(op: OperatingPoint, sp: SplitParams) -> DiversityPair:
    """Better of CMO and the HK split at ``sp``, judged on ``d1``.

    A tie goes to CMO.  ``extra["branch"]`` records which one was taken.
    """
    cmo = cmo_diversity(op)
    hk = hk_diversity(op, sp)
    if cmo.d1 >= hk.d1:
        return DiversityPair(cmo.d1, cmo.d2, extra={"branch": "cmo"})
    return DiversityPair(hk.d1, hk.d2, extra={"branch": "hk"})


def mixed_upper_bounds(op: OperatingPoint, mp: MixedParams) -> DiversityPair:
    """Upper bounds on the diversities of the CMO-then-HK two-slot scheme.

    The bounds ignore the third event at each receiver, so they can only
    overestimate the true exponents.

    Raises:
        ParameterError: if ``lam`` is not strictly inside ``(0, 1)``.
    """
    lam = mp.lam
    if not 0.0 < lam < 1.0:
        raise ParameterError(f"lambda must lie in (0, 1), got {lam}")
    r1, beta, b = op.r1, op.beta, mp.b
    pb = plus(beta - b)
    d11 = max(plus(1.0 - r1 / lam), plus(1.0 - r1 - (1.0 - lam) * pb))

    c = r1 + lam * mp.t21
    if c <= b:
        d12 = plus(1.0 - c) + plus(beta - c)
    elif c >= lam * beta + (1.0 - lam) * b:
        d12 = plus(1.0 - c - (1.0 - lam) * pb)
    else:
        q = (c - (1.0 - lam) * b) / lam
        d12 = plus(1.0 - q) + plus(beta - q)

    d21 = plus(1.0 - op.r2)
    d22 = plus(1.0 - (op.r2 - lam * mp.t21) / (1.0 - lam) - b)
    return DiversityPair(
        min(d11, d12), min(d21, d22),
        extra={"d11": d11, "d12": d12, "d21": d21, "d22": d22},
    )
