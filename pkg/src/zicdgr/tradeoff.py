"""Optimising the HK split: rate-region cases, closed-form tradeoff curves,
the CMO/HK envelope, and a brute-force ``(t2, b)`` sweep that checks them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .closedform import cmo_diversity, hk_diversity
from .model import RANGE_SLACK, OperatingPoint, ParameterError, SplitParams, b_max

__all__ = [
    "OutOfScopeError",
    "MgrCase",
    "classify_mgr",
    "Breakpoints",
    "theorem2_breakpoints",
    "Theorem2Point",
    "theorem2_d2",
    "CurvePoint",
    "TradeoffCurve",
    "hk_diversity_grid",
    "sweep_dgr",
    "full_envelope",
    "Envelope",
    "lemma1_check",
]

# tolerance for reproducing a prescribed (t2, b) through the diversity formulas
REPRODUCE_TOL = 1e-9


class OutOfScopeError(ParameterError):
    """The closed forms only cover ``beta <= 1``; use the oracle instead."""


@dataclass(frozen=True)
class MgrCase:
    """Which of the three rate-region cases an operating point falls in.

    ``tag`` is ``"case1"``, ``"case2"`` or ``"case3"``.  :meth:`contains`
    tests whether a split lies in the region where HK matches or beats CMO
    on ``d1`` (empty for case 1).
    """

    tag: str
    op: OperatingPoint
    description: str

    def contains(self, t2, b):
        """Elementwise membership of ``(t2, b)`` in the case's split region."""
        t2 = np.asarray(t2, dtype=np.float64)
        b = np.asarray(b, dtype=np.float64)
        r1, r2, beta = self.op.r1, self.op.r2, self.op.beta
        if self.tag == "case1":
            return np.zeros(np.broadcast(t2, b).shape, dtype=bool)
        if self.tag == "case2":
            return b >= np.maximum(r1 + t2, 2.0 * beta - (r1 + 2.0 * r2))
        return b >= beta - (min(r2, 1.0 - r1) - t2)


def classify_mgr(op: OperatingPoint) -> MgrCase:
    """Classify ``op`` into the rate-region cases (``beta <= 1`` only).

    Raises:
        OutOfScopeError: for ``beta > 1``.
    """
    r1, r2, beta = op.r1, op.r2, op.beta
    if beta > 1.0:
        raise OutOfScopeError(
            f"beta={beta} > 1: no closed-form case analysis; use the oracle (zicdgr.oracle)"
        )
    if beta >= r1 + 2.0 * r2:
        return MgrCase("case1", op, "no split gives d1_HK > d1_CMO")
    if beta >= r1 + r2:
        lo = 2.0 * beta - (r1 + 2.0 * r2)
        return MgrCase("case2", op, f"d1_HK >= d1_CMO for b >= max(r1 + t2, {lo:.12g})")
    return MgrCase(
        "case3", op, f"d1_HK >= d1_CMO for b >= {beta:.12g} - ({min(r2, 1.0 - r1):.12g} - t2)"
    )


@dataclass(frozen=True)
class Breakpoints:
    case: str
    values: dict

    @property
    def span(self) -> tuple[float, float]:
        v = list(self.values.values())
        return v[0], v[-1]


def theorem2_breakpoints(op: OperatingPoint) -> Breakpoints:
    """Segment endpoints of the closed-form tradeoff curve.

    Raises:
        ParameterError: for case 1, which has no HK curve above CMO.
    """
    case = classify_mgr(op)
    r1, r2, beta = op.r1, op.r2, op.beta
    p = lambda x: max(x, 0.0)  # noqa: E731
    if case.tag == "case1":
        raise ParameterError("case 1: HK never exceeds CMO on d1, there is no curve")
    if case.tag == "case2":
        a11 = p(1.0 + beta - 2.0 * (r1 + r2))
        a12 = max(a11, p(1.0 - (beta + 2.0 * r1) / 3.0))
        a13 = p(1.0 - r1)
        return Breakpoints("case2", {"a11": a11, "a12": a12, "a13": a13})
    return Breakpoints("case3", {
        "a21": p(1.0 - r1 - r2),
        "a22": p(1.0 - r1 - min(r2, beta)),
        "a23": p(1.0 - max(r1, beta)),
        "a24": p(1.0 - max(r1, (beta + 2.0 * r1) / 3.0)),
        "a25": p(1.0 - r1),
    })


@dataclass(frozen=True)
class Theorem2Point:
    """Closed-form ``d2`` at a given ``d1`` with the split that achieves it.

    ``alternatives`` lists every segment whose span contains ``d1`` as
    ``(segment, d2, t2, b, reproduced)``; ``reproduced`` tells whether the
    prescribed split gives back ``(d1, d2)`` through the HK formulas.
    """

    d1: float
    d2: float
    t2: float
    b: float
    segment: int
    reproduced: bool
    alternatives: tuple = ()


def _segments(op: OperatingPoint, bp: Breakpoints, d1: float):
    r1, r2, beta = op.r1, op.r2, op.beta
    p = lambda x: max(x, 0.0)  # noqa: E731
    b_lin = d1 - 1.0 + r1 + beta
    t_lin = d1 - 1.0 + beta
    t_half = 0.5 * (1.0 + beta - 2.0 * r1 - d1)
    slope = 0.5 * p(5.0 - beta - 4.0 * r1 - 2.0 * r2 - 3.0 * d1)
    v = list(bp.values.values())
    if bp.case == "case2":
        return [
            (1, v[0], v[1], p(1.0 - r1 - max(r2, 2.0 * (beta - r1 - r2))), t_lin, b_lin),
            (2, v[1], v[2], slope, t_half, b_lin),
        ]
    t_flat = 1.0 - r1 - d1
    return [
        (1, v[0], v[1], p(1.0 - max(r2, beta)), t_flat, beta),
        (2, v[1], v[2], p(2.0 - r1 - r2 - beta - d1), t_flat, beta),
        (3, v[2], v[3], p(1.0 - min(r1, beta) - r2), t_lin, b_lin),
        (4, v[3], v[4], slope, t_half, b_lin),
    ]


def _reproduces(op: OperatingPoint, d1: float, d2: float, t2: float, b: float) -> bool:
    if t2 < -RANGE_SLACK or t2 > op.r2 + RANGE_SLACK or b < -RANGE_SLACK:
        return False
    got = hk_diversity(op, SplitParams(op, t2, b))
    return abs(got.d1 - d1) <= REPRODUCE_TOL and abs(got.d2 - d2) <= REPRODUCE_TOL


def theorem2_d2(op: OperatingPoint, d1: float) -> Theorem2Point:
    """Best ``d2`` on the closed-form curve at ``d1``.

    Segments are treated as closed intervals.  Where several contain ``d1``
    the largest ``d2`` among those whose prescribed split reproduces the
    point wins; if none reproduces, the largest formula value is returned
    with ``reproduced=False``.

    Raises:
        ParameterError: if ``d1`` lies outside the curve's span, or for
            case 1.
    """
    d1 = float(d1)
    bp = theorem2_breakpoints(op)
    lo, hi = bp.span
    if not lo - RANGE_SLACK <= d1 <= hi + RANGE_SLACK:
        raise ParameterError(f"d1={d1} outside the curve span [{lo}, {hi}]")
    alts = []
    for seg, a, z, d2, t2, b in _segments(op, bp, d1):
        if a - RANGE_SLACK <= d1 <= z + RANGE_SLACK:
            alts.append((seg, d2, t2, b, _reproduces(op, d1, d2, t2, b)))
    good = [a for a in alts if a[4]] or alts
    # max d2, ties to the lowest segment
    seg, d2, t2, b, ok = max(good, key=lambda a: (a[1], -a[0]))
    t2c = min(max(t2, 0.0), op.r2)
    return Theorem2Point(d1, d2, t2c, max(b, 0.0), seg, ok, tuple(alts))


@dataclass(frozen=True)
class CurvePoint:
    d1: float
    d2: float
    t2: float
    b: float
    segment: str


@dataclass
class TradeoffCurve:
    """Ordered ``(d1, d2)`` samples with the splits that achieve them."""

    op: OperatingPoint
    points: list = field(default_factory=list)
    breakpoints: dict = field(default_factory=dict)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return (np.array([p.d1 for p in self.points]), np.array([p.d2 for p in self.points]))

    def value_at(self, d1: float) -> float:
        """Largest ``d2`` over points with ``d1' >= d1``; ``-inf`` if none."""
        best = -math.inf
        for p in self.points:
            if p.d1 >= d1 and p.d2 > best:
                best = p.d2
        return best


def hk_diversity_grid(op: OperatingPoint, t2, b) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised ``(d1, d2)`` of the HK formulas over arrays of splits."""
    t2 = np.asarray(t2, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    r1, r2, beta = op.r1, op.r2, op.beta
    pb = np.maximum(beta - b, 0.0)
    c = r1 + t2
    d11 = np.maximum(1.0 - r1 - pb, 0.0)
    d12 = np.where(
        b >= c,
        np.maximum(1.0 - c, 0.0) + np.maximum(beta - c, 0.0),
        np.maximum(1.0 - c - pb, 0.0),
    )
    d2 = np.minimum(max(1.0 - r2, 0.0), np.maximum(1.0 - b - np.maximum(r2 - t2, 0.0), 0.0))
    return np.minimum(d11, d12), d2


def _grid(hi: float, resolution: float) -> np.ndarray:
    return np.linspace(0.0, hi, int(math.ceil(hi / resolution - 1e-9)) + 1)


def _staircase(d1, d2, t2, b) -> list:
    """Pareto-maximal points, ordered by increasing ``d1``."""
    order = np.lexsort((-d2, -d1))
    pts = []
    best = -math.inf
    last_d1 = math.inf
    for i in order:
        if d2[i] > best and d1[i] < last_d1:
            pts.append(CurvePoint(float(d1[i]), float(d2[i]), float(t2[i]), float(b[i]), "sweep"))
            best = d2[i]
            last_d1 = d1[i]
    pts.reverse()
    return pts


def sweep_dgr(op: OperatingPoint, resolution: float = 1e-3) -> TradeoffCurve:
    """Nondominated ``(d1, d2)`` over a uniform ``(t2, b)`` grid.

    ``t2`` spans ``[0, r2]`` and ``b`` spans ``[0, b_max]``, both with spacing
    at most ``resolution``.
    """
    if not resolution > 0.0:
        raise ParameterError(f"resolution must be > 0, got {resolution}")
    T, B = np.meshgrid(_grid(op.r2, resolution), _grid(b_max(op), resolution), indexing="ij")
    d1, d2 = hk_diversity_grid(op, T, B)
    return TradeoffCurve(op, _staircase(d1.ravel(), d2.ravel(), T.ravel(), B.ravel()))


def full_envelope(op: OperatingPoint, resolution: float = 1e-3) -> TradeoffCurve:
    """CMO point followed by the HK points that beat it on ``d1``.

    For ``beta <= 1`` the HK part is the closed-form curve sampled every
    ``resolution`` plus its breakpoints.  For ``beta > 1`` it is the sweep.
    The CMO point carries ``t2 = r2`` and ``b = inf``.
    """
    cmo = cmo_diversity(op)
    pts = [CurvePoint(cmo.d1, cmo.d2, op.r2, math.inf, "cmo")]
    if op.beta > 1.0:
        sw = sweep_dgr(op, resolution)
        pts += [p for p in sw.points if p.d1 > cmo.d1]
        return TradeoffCurve(op, pts)
    case = classify_mgr(op)
    if case.tag == "case1":
        return TradeoffCurve(op, pts)
    bp = theorem2_breakpoints(op)
    lo, hi = bp.span
    grid = np.concatenate([np.arange(lo, hi, resolution), list(bp.values.values())])
    for d1 in np.unique(grid):
        if d1 <= cmo.d1 + RANGE_SLACK or d1 > hi:
            continue
        tp = theorem2_d2(op, float(d1))
        pts.append(CurvePoint(float(d1), tp.d2, tp.t2, tp.b, f"{bp.case}-seg{tp.segment}"))
    return TradeoffCurve(op, pts, dict(bp.values))


class Envelope:
    """Achievable fixed-split region used to judge dominance.

    Built from the CMO point, a ``(t2, b)`` sweep and, for ``beta <= 1``,
    the reproduced closed-form points.  ``value(d1)`` is the best ``d2``
    reachable with at least ``d1``.
    """

    def __init__(self, op: OperatingPoint, resolution: float = 5e-4):
        self.op = op
        self.resolution = resolution
        pts = list(sweep_dgr(op, resolution).points)
        env = full_envelope(op, resolution)
        pts.append(env.points[0])
        pts += [p for p in env.points[1:] if p.segment != "sweep"]
        d1 = np.array([p.d1 for p in pts])
        d2 = np.array([p.d2 for p in pts])
        order = np.argsort(d1, kind="stable")
        self.d1 = d1[order]
        # suffix maximum: best d2 among points with d1' >= d1
        self.d2 = np.maximum.accumulate(d2[order][::-1])[::-1]

    def value(self, d1) -> np.ndarray:
        d1 = np.asarray(d1, dtype=np.float64)
        idx = np.searchsorted(self.d1, d1, side="left")
        padded = np.append(self.d2, -np.inf)
        return padded[idx]

    def dominates(self, d1, d2, tol: float):
        """True where ``(d1, d2)`` is within ``tol`` of the achievable set."""
        return np.asarray(d2) <= self.value(np.asarray(d1) - tol) + tol


@dataclass(frozen=True)
class Lemma1Report:
    case: str
    grid_points: int
    region_points: int
    region_violations: int
    outside_improvements: int
    max_outside_gap: float


def lemma1_check(op: OperatingPoint, resolution: float = 2e-3) -> Lemma1Report:
    """Compare the case region with the gridded set where HK beats CMO.

    ``region_violations`` counts region points with ``d1_HK < d1_CMO``.
    ``outside_improvements`` counts points with ``d1_HK > d1_CMO`` that lie
    farther than one grid step (in ``b``) outside the region.  For case 1
    the latter counts every improving point.
    """
    case = classify_mgr(op)
    T, B = np.meshgrid(_grid(op.r2, resolution), _grid(b_max(op), resolution), indexing="ij")
    d1, _ = hk_diversity_grid(op, T, B)
    d1c = cmo_diversity(op).d1
    inside = case.contains(T, B)
    viol = inside & (d1 < d1c - 1e-12)
    better = d1 > d1c + 1e-12
    if case.tag == "case1":
        outside = better
    else:
        outside = better & ~case.contains(T, B + 1.000001 * resolution)
    gap = float(np.max(d1[better] - d1c)) if better.any() else 0.0
    return Lemma1Report(
        case.tag, int(T.size), int(inside.sum()), int(viol.sum()), int(outside.sum()), gap
    )
