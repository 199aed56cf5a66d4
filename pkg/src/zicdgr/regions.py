"""Outage-region membership for every transmission scheme.

Two flavours are provided.  The high-SNR predicates act on channel exponents
:class:`~zicdgr.model.GammaTriple` and are piecewise-linear in them.  The
finite-SNR predicate acts on channel powers ``|h|^2`` at a given SNR and uses
the exact mutual-information expressions, including the exact private power
fraction ``alpha = 1 / (1 + SNR^b)``.

All inequalities are strict, so every region is open in exponent space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import events as ev
from ._backend import backend
from .model import (
    RANGE_SLACK,
    GammaTriple,
    OperatingPoint,
    ParameterError,
    SplitParams,
)

__all__ = [
    "HK",
    "CMO",
    "TIAN",
    "TimeShareHK",
    "MixedCmoHk",
    "TimeShareParams",
    "MixedParams",
    "Scheme",
    "parse_scheme",
    "scheme_code",
    "kernel_params",
    "hk_highsnr_outage",
    "cmo_highsnr_outage",
    "tian_highsnr_outage",
    "timeshare_highsnr_outage",
    "mixed_highsnr_outage",
    "highsnr_outage",
    "HighSnrRegion",
    "finite_constants",
    "finite_snr_outage",
]


def _unit(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or not 0.0 <= value <= 1.0:
        raise ParameterError(f"{name} must lie in [0, 1], got {value}")
    return value


def _nonneg(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value < -RANGE_SLACK:
        raise ParameterError(f"{name} must be a finite value >= 0, got {value}")
    return max(value, 0.0)


@dataclass(frozen=True)
class TimeShareParams:
    """Two-slot HK split: slot one lasts a fraction ``lam`` of the block.

    ``t22`` and ``scenario`` are carried for reporting.  All three scenarios
    share one outage event set, which depends on the slots only through
    ``b_c`` and ``t_c``.
    """

    lam: float
    b1: float
    b2: float
    t21: float
    t22: float = 0.0
    scenario: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "lam", _unit("lambda", self.lam))
        for name in ("b1", "b2", "t21", "t22"):
            object.__setattr__(self, name, _nonneg(name, getattr(self, name)))
        if self.scenario not in (1, 2, 3):
            raise ParameterError(f"scenario must be 1, 2 or 3, got {self.scenario!r}")

    @property
    def b_c(self) -> float:
        return ev.timeshare_split(self.lam, self.b1, self.b2, self.t21)[0]

    @property
    def t_c(self) -> float:
        return ev.timeshare_split(self.lam, self.b1, self.b2, self.t21)[1]


@dataclass(frozen=True)
class MixedParams:
    """CMO in a slot of length ``lam``, HK with exponent ``b`` in the rest."""

    lam: float
    b: float
    t21: float
    t22: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "lam", _unit("lambda", self.lam))
        for name in ("b", "t21", "t22"):
            object.__setattr__(self, name, _nonneg(name, getattr(self, name)))


@dataclass(frozen=True)
class HK:
    split: SplitParams
    name = "hk"


@dataclass(frozen=True)
class CMO:
    name = "cmo"


@dataclass(frozen=True)
class TIAN:
    name = "tian"


@dataclass(frozen=True)
class TimeShareHK:
    params: TimeShareParams
    name = "timeshare"


@dataclass(frozen=True)
class MixedCmoHk:
    params: MixedParams
    name = "mixed"


Scheme = Union[HK, CMO, TIAN, TimeShareHK, MixedCmoHk]

_CODES = {HK: ev.HK, CMO: ev.CMO, TIAN: ev.TIAN, TimeShareHK: ev.TIMESHARE, MixedCmoHk: ev.MIXED}


def scheme_code(scheme: Scheme) -> int:
    try:
        return _CODES[type(scheme)]
    except KeyError:
        raise ParameterError(f"unknown scheme {scheme!r}") from None


def kernel_params(op: OperatingPoint, scheme: Scheme) -> np.ndarray:
    """Flat ``[r1, r2, beta, a, b, c, d]`` vector consumed by the kernels."""
    a = b = c = d = 0.0
    if isinstance(scheme, HK):
        a, b = scheme.split.t2, scheme.split.b
    elif isinstance(scheme, TimeShareHK):
        p = scheme.params
        a, b, c, d = p.lam, p.b1, p.b2, p.t21
    elif isinstance(scheme, MixedCmoHk):
        p = scheme.params
        a, b, c, d = p.lam, p.b, p.t21, p.t22
    else:
        scheme_code(scheme)
    return np.array([op.r1, op.r2, op.beta, a, b, c, d], dtype=np.float64)


def parse_scheme(name: str, op: OperatingPoint, **kw) -> Scheme:
    """Build a scheme from its short name and keyword parameters."""
    name = name.lower()
    if name == "hk":
        return HK(SplitParams(op, kw["t2"], kw["b"]))
    if name == "cmo":
        return CMO()
    if name == "tian":
        return TIAN()
    if name == "timeshare":
        return TimeShareHK(
            TimeShareParams(kw["lam"], kw["b1"], kw["b2"], kw["t21"], kw.get("t22", 0.0))
        )
    if name == "mixed":
        return MixedCmoHk(MixedParams(kw["lam"], kw["b"], kw["t21"], kw["t22"]))
    raise ParameterError(f"unknown scheme {name!r}")


def _check_rx(receiver: int) -> None:
    if receiver not in (1, 2):
        raise ParameterError(f"receiver must be 1 or 2, got {receiver!r}")


# --- high-SNR predicates ---------------------------------------------------


def highsnr_outage(g: GammaTriple, op: OperatingPoint, scheme: Scheme, receiver: int) -> bool:
    """True iff the exponent triple lies in the scheme's high-SNR outage set."""
    _check_rx(receiver)
    hit = ev.highsnr_union(
        scheme_code(scheme), kernel_params(op, scheme), receiver, g.g11, g.g21, g.g22
    )
    return bool(hit)


def hk_highsnr_outage(g: GammaTriple, op: OperatingPoint, sp: SplitParams, receiver: int) -> bool:
    return highsnr_outage(g, op, HK(sp), receiver)


def cmo_highsnr_outage(g: GammaTriple, op: OperatingPoint, receiver: int) -> bool:
    return highsnr_outage(g, op, CMO(), receiver)


def tian_highsnr_outage(g: GammaTriple, op: OperatingPoint, receiver: int) -> bool:
    return highsnr_outage(g, op, TIAN(), receiver)


def timeshare_highsnr_outage(
    g: GammaTriple, op: OperatingPoint, tsp: TimeShareParams, receiver: int
) -> bool:
    return highsnr_outage(g, op, TimeShareHK(tsp), receiver)


def mixed_highsnr_outage(g: GammaTriple, op: OperatingPoint, mp: MixedParams, receiver: int) -> bool:
    return highsnr_outage(g, op, MixedCmoHk(mp), receiver)


class HighSnrRegion:
    """One receiver's high-SNR outage set as a callable predicate.

    Besides scalar membership it exposes vectorised evaluation and the
    smallest ``g11`` in the set for given ``(g21, g22)``, both dispatched to
    the active kernel backend.  The oracle uses these fast paths.
    """

    def __init__(self, op: OperatingPoint, scheme: Scheme, receiver: int):
        _check_rx(receiver)
        self.op = op
        self.scheme = scheme
        self.receiver = receiver
        self.code = scheme_code(scheme)
        self.params = kernel_params(op, scheme)

    def __call__(self, g: GammaTriple) -> bool:
        return highsnr_outage(g, self.op, self.scheme, self.receiver)

    def __repr__(self) -> str:
        return f"HighSnrRegion({self.op!r}, {self.scheme!r}, rx={self.receiver})"

    @property
    def relevant_axes(self) -> tuple[bool, bool]:
        """Whether ``(g21, g22)`` can influence membership."""
        return (self.receiver == 1, self.receiver == 2)

    def mask(self, g11, g21, g22) -> np.ndarray:
        g11, g21, g22 = np.broadcast_arrays(
            *(np.asarray(v, dtype=np.float64) for v in (g11, g21, g22))
        )
        shape = g11.shape
        out = backend().highsnr_mask(
            self.code, self.params, self.receiver,
            np.ascontiguousarray(g11).ravel(),
            np.ascontiguousarray(g21).ravel(),
            np.ascontiguousarray(g22).ravel(),
        )
        return np.asarray(out, dtype=bool).reshape(shape)

    def g11_threshold(self, g21, g22, hi: float, iters: int = 52) -> np.ndarray:
        """Infimum of ``g11`` in the set along each ``(g21, g22)`` ray.

        0 when the ray starts inside the set, ``inf`` when ``g11 = hi`` is
        still outside.
        """
        g21, g22 = np.broadcast_arrays(
            np.asarray(g21, dtype=np.float64), np.asarray(g22, dtype=np.float64)
        )
        shape = g21.shape
        out = backend().g11_threshold(
            self.code, self.params, self.receiver,
            np.ascontiguousarray(g21).ravel(),
            np.ascontiguousarray(g22).ravel(),
            float(hi), int(iters),
        )
        return np.asarray(out).reshape(shape)


# --- finite SNR ------------------------------------------------------------


def _alpha(b: float, log_snr: float) -> float:
    # 1 / (1 + SNR^b) without overflow
    return math.exp(-np.logaddexp(0.0, b * log_snr))


def finite_constants(op: OperatingPoint, scheme: Scheme, snr_db: float) -> np.ndarray:
    """Per-SNR constant vector consumed by the finite-SNR kernels.

    See :mod:`zicdgr.events` for the layout of each scheme code.  The joint
    decoding events put the full interference power ``SNR^beta |h21|^2`` in
    the numerator, over the private-message interference plus noise.
    """
    snr_db = float(snr_db)
    if not math.isfinite(snr_db) or snr_db <= 0.0:
        raise ParameterError(f"snr_db must be a finite value > 0, got {snr_db}")
    L = snr_db / 10.0 * math.log(10.0)
    S = math.exp(L)
    I = math.exp(op.beta * L)
    r1, r2 = op.r1, op.r2

    def A(rate: float) -> float:
        return math.expm1(rate * L)

    if isinstance(scheme, CMO):
        return np.array([S, 0.0, I, A(r1), A(r1 + r2), A(r2), 0.0, 0.0])
    if isinstance(scheme, TIAN):
        return np.array([S, I, 0.0, A(r1), 0.0, A(r2), 0.0, 0.0])
    if isinstance(scheme, HK):
        sp = scheme.split
        a = _alpha(sp.b, L)
        return np.array(
            [S, I * a, I, A(r1), A(r1 + sp.t2), A(r2), S * a, A(sp.s2)]
        )
    if isinstance(scheme, TimeShareHK):
        p = scheme.params
        a1, a2 = _alpha(p.b1, L), _alpha(p.b2, L)
        tc = p.t_c
        return np.array([
            L, S, p.lam,
            I * a1, I, I * a2, I,
            S * a1, S * a2,
            r1 * L, (r1 + tc) * L, r2 * L, (r2 - tc) * L,
        ])
    if isinstance(scheme, MixedCmoHk):
        p = scheme.params
        lam = p.lam
        a = _alpha(p.b, L)
        return np.array([
            L, S, lam, I, I * a, I, S * a,
            r1 * L,
            (r1 + lam * p.t21) * L,
            (r1 + lam * p.t21 - (1.0 - lam) * p.t22) * L,
            r2 * L,
            (r2 - lam * p.t21) * L,
            (r2 - (1.0 - lam) * p.t22) * L,
        ])
    raise ParameterError(f"unknown scheme {scheme!r}")


def finite_snr_outage(h_sq, snr_db: float, op: OperatingPoint, scheme: Scheme, receiver: int) -> bool:
    """Exact outage membership at a finite SNR.

    Args:
        h_sq: ``(|h11|^2, |h21|^2)`` for receiver 1, or ``|h22|^2`` for
            receiver 2 (a 1-tuple is also accepted).
        snr_db: SNR in dB; must be positive.
        op: Operating point; rates are ``r * ln(SNR)`` nats.
        scheme: Transmission scheme.
        receiver: 1 or 2.
    """
    _check_rx(receiver)
    k = finite_constants(op, scheme, snr_db)
    if receiver == 1:
        x11, x21 = (float(v) for v in h_sq)
        x22 = 0.0
    else:
        x22 = float(h_sq[0]) if isinstance(h_sq, (tuple, list, np.ndarray)) else float(h_sq)
        x11 = x21 = 0.0
    with np.errstate(invalid="ignore", over="ignore"):
        hit = ev.finite_union(scheme_code(scheme), k, receiver, x11, x21, x22)
    return bool(hit)
