"""Diversity as an infimum over an outage set, computed numerically.

The diversity of an outage set ``O`` is ``inf { g11 + g21 + g22 : g in O }``.
Every high-SNR outage set here is an up-set (raising any exponent never
leaves it), so along each ray ``(., g21, g22)`` the set is ``g11 > phi``.
The oracle finds ``phi`` exactly by bisection and minimises
``phi(g21, g22) + g21 + g22`` in two stages:

1. seeds: the Cartesian product of per-axis breakpoints, i.e. the values
   where some ``[.]+`` argument of the events changes sign;
2. refinement: coordinate line searches around the best seeds with step
   sizes shrinking to ``grid_step``.

:func:`grid_infimum` is an unrelated brute-force check on a uniform grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import DiversityPair, GammaTriple, OperatingPoint, ParameterError, SplitParams
from .regions import (
    CMO,
    HK,
    TIAN,
    HighSnrRegion,
    MixedCmoHk,
    Scheme,
    TimeShareHK,
)

__all__ = [
    "OracleConfig",
    "OracleResult",
    "infimum_diversity",
    "locate_infimum",
    "candidate_breakpoints",
    "grid_infimum",
    "diversity",
    "diversity_pair",
]

Predicate = Callable[[GammaTriple], bool]

# line-search half-width, in steps, per refinement level
_LINE_K = 4
_COARSE_STEPS = (0.05, 0.005)
# seeds refined independently, to avoid stalling on a ridge
_N_STARTS = 4


@dataclass(frozen=True)
class OracleConfig:
    """Search settings.

    Attributes:
        grid_step: Finest refinement step in exponent space.
        gamma_max: Edge of the search box ``[0, gamma_max]^3``.
        refine_rounds: Coordinate passes per refinement level; 0 keeps the
            seed result.
        eps: Offset into the open set when evaluating a seed.
        bisect_iters: Bisection steps for the ``g11`` threshold.
    """

    grid_step: float = 1e-3
    gamma_max: float = 2.5
    refine_rounds: int = 3
    eps: float = 1e-9
    bisect_iters: int = 52

    def __post_init__(self) -> None:
        for name in ("grid_step", "gamma_max", "eps"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value <= 0.0:
                raise ParameterError(f"{name} must be finite and > 0, got {value}")
            object.__setattr__(self, name, value)
        if int(self.refine_rounds) != self.refine_rounds or self.refine_rounds < 0:
            raise ParameterError(f"refine_rounds must be an integer >= 0, got {self.refine_rounds}")
        if int(self.bisect_iters) != self.bisect_iters or self.bisect_iters < 1:
            raise ParameterError(f"bisect_iters must be a positive integer, got {self.bisect_iters}")

    @classmethod
    def for_point(cls, op: OperatingPoint, **overrides) -> "OracleConfig":
        """Default box ``1 + beta + 0.5`` for an operating point."""
        kw = {"gamma_max": 1.0 + op.beta + 0.5}
        kw.update(overrides)
        cfg = cls(**kw)
        if cfg.gamma_max < 1.0 + op.beta:
            raise ParameterError(f"gamma_max must be >= 1 + beta = {1.0 + op.beta}")
        return cfg


@dataclass(frozen=True)
class OracleResult:
    value: float
    argmin: GammaTriple | None
    evaluations: int


def _as_scheme(sp_or_scheme) -> Scheme:
    if isinstance(sp_or_scheme, SplitParams):
        return HK(sp_or_scheme)
    return sp_or_scheme


def candidate_breakpoints(op: OperatingPoint, sp_or_scheme, gamma_max: float | None = None) -> dict:
    """Per-axis values where a ``[.]+`` argument of the events changes sign.

    Args:
        op: Operating point.
        sp_or_scheme: A :class:`SplitParams` (HK) or any scheme object.
        gamma_max: Box edge for clipping; defaults to ``1 + beta + 0.5``.

    Returns:
        ``{"g11": array, "g21": array, "g22": array}``, each sorted, unique
        and clipped to ``[0, gamma_max]``.  ``0``, ``1`` and ``beta`` are
        always present.
    """
    scheme = _as_scheme(sp_or_scheme)
    if gamma_max is None:
        gamma_max = 1.0 + op.beta + 0.5
    r1, r2, beta = op.r1, op.r2, op.beta
    g11: list[float] = []
    g21: list[float] = []
    g22: list[float] = []

    if isinstance(scheme, (HK, TimeShareHK)):
        if isinstance(scheme, HK):
            t, b = scheme.split.t2, scheme.split.b
        else:
            t, b = scheme.params.t_c, scheme.params.b_c
        c = r1 + t
        s = r2 - t
        g21 += [beta - b, beta - c, beta - b - (1.0 - r1), beta - b - (1.0 - c)]
        g11 += [1.0 - r1, 1.0 - c, 1.0 - r1 - max(beta - b, 0.0), 1.0 - c - max(beta - b, 0.0)]
        g22 += [1.0 - r2, 1.0 - b - s]
    elif isinstance(scheme, CMO):
        g21 += [beta - (r1 + r2)]
        g11 += [1.0 - r1, 1.0 - r1 - r2]
        g22 += [1.0 - r2]
    elif isinstance(scheme, TIAN):
        g21 += [beta - (1.0 - r1)]
        g11 += [1.0 - r1, 1.0 - r1 - beta]
        g22 += [1.0 - r2]
    elif isinstance(scheme, MixedCmoHk):
        p = scheme.params
        lam, b = p.lam, p.b
        c = r1 + lam * p.t21
        c3 = c - (1.0 - lam) * p.t22
        d = r2 - (1.0 - lam) * p.t22
        g21 += [beta - b, beta - c]
        g11 += [1.0 - r1, 1.0 - c]
        g22 += [1.0 - r2, 1.0 - b, 1.0 - d - (1.0 - lam) * b]
        if lam > 0.0:
            g21 += [beta - b - r1 / lam, beta - (c - (1.0 - lam) * b) / lam, beta - c3 / lam]
            g11 += [1.0 - r1 / lam, 1.0 - c3 / lam]
            g22 += [1.0 - d / lam]
        if lam < 1.0:
            g21 += [beta - b - (1.0 - r1) / (1.0 - lam), beta - b - (1.0 - c) / (1.0 - lam)]
            g22 += [1.0 - b - (r2 - lam * p.t21) / (1.0 - lam)]
    else:
        raise ParameterError(f"unknown scheme {scheme!r}")

    def axis(vals: list[float]) -> np.ndarray:
        v = np.array(vals + [0.0, 1.0, beta], dtype=np.float64)
        v = v[np.isfinite(v)]
        v = np.clip(v, 0.0, gamma_max)
        return np.unique(np.round(v, 12))

    return {"g11": axis(g11), "g21": axis(g21), "g22": axis(g22)}


def _levels(cfg: OracleConfig) -> list[float]:
    return [s for s in _COARSE_STEPS if s > cfg.grid_step] + [cfg.grid_step]


class _Objective:
    """``phi(g21, g22) + g21 + g22`` evaluated slightly inside the open set."""

    def __init__(self, threshold, cfg: OracleConfig):
        self.threshold = threshold
        self.cfg = cfg
        self.calls = 0

    def __call__(self, g21: np.ndarray, g22: np.ndarray) -> np.ndarray:
        e = self.cfg.eps
        self.calls += int(np.size(g21))
        phi = self.threshold(g21 + e, g22 + e)
        return phi + g21 + g22


def _directions(relevant) -> list[tuple[float, float]]:
    """Line-search directions: the relevant axes, plus diagonals when both
    axes matter, since kinks of a generic set need not be axis-aligned."""
    if relevant[0] and relevant[1]:
        ang = np.arange(8) * (np.pi / 8)
        return [(float(np.cos(a)), float(np.sin(a))) for a in ang]
    return [(1.0, 0.0)] if relevant[0] else [(0.0, 1.0)]


def _search(obj: _Objective, ax21: np.ndarray, ax22: np.ndarray, relevant, cfg) -> tuple[float, float, float]:
    G21, G22 = np.meshgrid(ax21, ax22, indexing="ij")
    G21, G22 = G21.ravel(), G22.ravel()
    w = obj(G21, G22)
    if not np.isfinite(w).any():
        return math.inf, 0.0, 0.0
    order = np.argsort(w, kind="stable")[:_N_STARTS]
    best = (math.inf, 0.0, 0.0)
    hi = cfg.gamma_max
    ks = np.arange(-_LINE_K, _LINE_K + 1, dtype=np.float64)
    dirs = _directions(relevant)
    for idx in order:
        val, x, y = float(w[idx]), float(G21[idx]), float(G22[idx])
        if not math.isfinite(val):
            continue
        for step in _levels(cfg):
            for _ in range(cfg.refine_rounds):
                moved = False
                for dx, dy in dirs:
                    xs = np.clip(x + ks * (step * dx), 0.0, hi)
                    ys = np.clip(y + ks * (step * dy), 0.0, hi)
                    wl = obj(xs, ys)
                    j = int(np.argmin(wl))
                    if wl[j] < val:
                        val, x, y = float(wl[j]), float(xs[j]), float(ys[j])
                        moved = True
                if not moved:
                    break
        if val < best[0]:
            best = (val, x, y)
    return best


def _scalar_threshold(predicate: Predicate, cfg: OracleConfig):
    hi = cfg.gamma_max

    def phi_one(a: float, c: float) -> float:
        if predicate(GammaTriple(0.0, a, c)):
            return 0.0
        if not predicate(GammaTriple(hi, a, c)):
            return math.inf
        lo, up = 0.0, hi
        for _ in range(cfg.bisect_iters):
            mid = 0.5 * (lo + up)
            if predicate(GammaTriple(mid, a, c)):
                up = mid
            else:
                lo = mid
        return up

    def phi(g21, g22):
        g21 = np.atleast_1d(g21)
        g22 = np.atleast_1d(g22)
        return np.array([phi_one(float(a), float(c)) for a, c in zip(g21, g22)])

    return phi


def locate_infimum(predicate, cfg: OracleConfig | None = None, seeds: dict | None = None) -> OracleResult:
    """Infimum of the exponent weight over ``predicate`` plus where it occurs.

    Args:
        predicate: A :class:`HighSnrRegion` (fast path) or any monotone
            callable taking a :class:`GammaTriple`.
        cfg: Search settings; defaults to :class:`OracleConfig`.
        seeds: Optional ``{"g21": ..., "g22": ...}`` seed axes.  Regions
            default to their breakpoint inventory, other callables to a
            uniform 0.1 grid.

    Returns:
        The infimum (``math.inf`` for a set empty in the box), an
        approximate minimiser and the number of ray evaluations.
    """
    cfg = cfg or OracleConfig()
    hi = cfg.gamma_max
    if isinstance(predicate, HighSnrRegion):
        region = predicate
        relevant = region.relevant_axes

        def threshold(a, c):
            return region.g11_threshold(a, c, hi, cfg.bisect_iters)

        if seeds is None:
            seeds = candidate_breakpoints(region.op, region.scheme, hi)
    else:
        relevant = (True, True)
        threshold = _scalar_threshold(predicate, cfg)
        if seeds is None:
            coarse = np.linspace(0.0, hi, int(math.ceil(hi / 0.1)) + 1)
            seeds = {"g21": coarse, "g22": coarse}

    def seed_axis(key: str, on: bool) -> np.ndarray:
        if not on:
            return np.zeros(1)
        v = np.clip(np.asarray(seeds[key], dtype=np.float64), 0.0, hi)
        return np.unique(np.concatenate([v, [0.0, hi]]))

    obj = _Objective(threshold, cfg)
    val, x, y = _search(obj, seed_axis("g21", relevant[0]), seed_axis("g22", relevant[1]), relevant, cfg)
    if not math.isfinite(val):
        return OracleResult(math.inf, None, obj.calls)
    g11 = max(val - x - y, 0.0)
    return OracleResult(val, GammaTriple(g11, x, y), obj.calls)


def infimum_diversity(predicate, cfg: OracleConfig | None = None, seeds: dict | None = None) -> float:
    """Diversity of an outage set: ``inf (g11 + g21 + g22)`` over it.

    Examples:
        >>> from zicdgr.regions import TIAN, HighSnrRegion
        >>> op = OperatingPoint(0.2, 0.3, 0.5)
        >>> round(infimum_diversity(HighSnrRegion(op, TIAN(), 1)), 6)
        0.3
    """
    return locate_infimum(predicate, cfg, seeds).value


def grid_infimum(predicate, step: float, gamma_max: float) -> float:
    """Brute-force minimum weight over grid points inside the set.

    Uses no monotonicity and no breakpoints.  Regions are evaluated in
    vectorised slabs; other callables point by point.
    """
    if not step > 0.0:
        raise ParameterError(f"step must be > 0, got {step}")
    n = int(round(gamma_max / step)) + 1
    axis = np.linspace(0.0, gamma_max, n)
    best = math.inf
    if isinstance(predicate, HighSnrRegion):
        G11, G22 = np.meshgrid(axis, axis, indexing="ij")
        for g21 in axis:
            m = predicate.mask(G11, g21, G22)
            if m.any():
                w = (G11 + g21 + G22)[m].min()
                best = min(best, float(w))
        return best
    for g21 in axis:
        for g22 in axis:
            if g21 + g22 >= best:
                continue
            for g11 in axis:
                if g11 + g21 + g22 >= best:
                    break
                if predicate(GammaTriple(g11, g21, g22)):
                    best = g11 + g21 + g22
                    break
    return best


def diversity(op: OperatingPoint, scheme: Scheme, receiver: int, cfg: OracleConfig | None = None) -> float:
    """Oracle diversity of one receiver under a scheme."""
    cfg = cfg or OracleConfig.for_point(op)
    return infimum_diversity(HighSnrRegion(op, scheme, receiver), cfg)


def diversity_pair(op: OperatingPoint, scheme: Scheme, cfg: OracleConfig | None = None) -> DiversityPair:
    cfg = cfg or OracleConfig.for_point(op)
    return DiversityPair(diversity(op, scheme, 1, cfg), diversity(op, scheme, 2, cfg))
