"""Does splitting the block into two differently-configured slots beat a
single fixed HK split?  Randomised checks for two constructions:

* two HK slots, which reduce to one split ``(t_c, b_c)``;
* a CMO slot followed by an HK slot, judged through its diversity upper
  bounds and through the oracle on its exact high-SNR events.

Draws are generated per index from a counter-based stream keyed by the
seed, so any subset of draws can be recomputed on its own.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .closedform import hk_diversity, mixed_upper_bounds
from .model import RANGE_SLACK, OperatingPoint, ParameterError, SplitParams, b_max
from .oracle import OracleConfig, diversity_pair
from .regions import MixedCmoHk, MixedParams, TimeShareHK, TimeShareParams
from .tradeoff import Envelope

__all__ = [
    "InfeasibleRateError",
    "DominanceReport",
    "timeshare_equivalent_split",
    "draw_timeshare",
    "draw_mixed",
    "verify_timeshare_dominance",
    "verify_mixed_dominance",
]

LAM_RANGE = (0.05, 0.95)
DEFAULT_TOL = 3e-3


class InfeasibleRateError(ParameterError):
    """The common rate ``lam * t21`` exceeds ``r2``."""


def timeshare_equivalent_split(tsp: TimeShareParams, op: OperatingPoint) -> SplitParams:
    """Single split ``(t2, b) = (lam * t21, lam * b1 + (1 - lam) * b2)``.

    Raises:
        InfeasibleRateError: if ``lam * t21 > r2``.
    """
    if tsp.t_c > op.r2 + RANGE_SLACK:
        raise InfeasibleRateError(f"t_c = lam * t21 = {tsp.t_c} exceeds r2 = {op.r2}")
    return SplitParams(op, tsp.t_c, tsp.b_c)


def _rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed), counter=int(index) << 64))


def draw_timeshare(op: OperatingPoint, seed: int, index: int) -> TimeShareParams:
    """Uniform draw from the validated two-slot HK parameter box."""
    g = _rng(seed, index)
    u = g.random(6)
    lam = LAM_RANGE[0] + (LAM_RANGE[1] - LAM_RANGE[0]) * u[0]
    bm = b_max(op)
    return TimeShareParams(
        lam=lam, b1=bm * u[1], b2=bm * u[2], t21=op.r2 / lam * u[3],
        t22=op.r2 * u[4], scenario=1 + int(3 * u[5]) % 3,
    )


def draw_mixed(op: OperatingPoint, seed: int, index: int) -> MixedParams:
    """Uniform draw from the validated CMO-then-HK parameter box."""
    g = _rng(seed, index)
    u = g.random(4)
    lam = LAM_RANGE[0] + (LAM_RANGE[1] - LAM_RANGE[0]) * u[0]
    return MixedParams(lam=lam, b=b_max(op) * u[1], t21=op.r2 / lam * u[2], t22=op.r2 * u[3])


@dataclass
class DominanceReport:
    """Outcome of a randomised dominance check.

    ``counterexamples`` holds every draw whose pair lies outside the
    fixed-split envelope, with full parameters.  ``mismatches`` holds draws
    failing the secondary consistency check: equivalence with the single
    split for two-slot HK, and bound-above-oracle for the mixed scheme.
    """

    kind: str
    op: OperatingPoint
    samples: int
    seed: int
    tolerance: float
    counterexamples: list = field(default_factory=list)
    mismatches: list = field(default_factory=list)
    max_excess: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.counterexamples and not self.mismatches

    def as_dict(self) -> dict:
        d = asdict(self)
        d["op"] = self.op.as_dict()
        d["passed"] = self.passed
        return d


def _excess(env: Envelope, d1: float, d2: float, tol: float) -> float:
    return float(d2 - (env.value(d1 - tol) + tol))


def verify_timeshare_dominance(
    op: OperatingPoint,
    samples: int,
    seed: int = 0,
    cfg: OracleConfig | None = None,
    envelope: Envelope | None = None,
    tol: float = DEFAULT_TOL,
) -> DominanceReport:
    """Check two-slot HK draws against the single-split formulas.

    For every draw the oracle pair on the two-slot events must match the
    closed-form pair at the equivalent split within ``tol``, and both pairs
    must lie inside the fixed-split envelope up to ``tol``.
    """
    if samples < 1:
        raise ParameterError(f"samples must be >= 1, got {samples}")
    cfg = cfg or OracleConfig.for_point(op)
    env = envelope or Envelope(op)
    rep = DominanceReport("timeshare", op, samples, seed, tol)
    for i in range(samples):
        tsp = draw_timeshare(op, seed, i)
        oracle = diversity_pair(op, TimeShareHK(tsp), cfg).as_tuple()
        closed = hk_diversity(op, timeshare_equivalent_split(tsp, op))
        closed = (closed.d1, closed.d2)
        params = asdict(tsp)
        if max(abs(oracle[0] - closed[0]), abs(oracle[1] - closed[1])) > tol:
            rep.mismatches.append({"index": i, "params": params, "oracle": oracle, "closed_form": closed})
        for label, pair in (("oracle", oracle), ("closed_form", closed)):
            ex = _excess(env, pair[0], pair[1], tol)
            rep.max_excess = max(rep.max_excess, ex + tol)
            if ex > 0.0:
                rep.counterexamples.append({
                    "index": i, "params": params, "source": label, "pair": pair,
                    "envelope_d2": float(env.value(pair[0])),
                })
    return rep


def verify_mixed_dominance(
    op: OperatingPoint,
    samples: int,
    seed: int = 0,
    cfg: OracleConfig | None = None,
    envelope: Envelope | None = None,
    tol: float = DEFAULT_TOL,
) -> DominanceReport:
    """Check CMO-then-HK draws against the fixed-split envelope.

    The upper-bound pair of each draw must lie inside the envelope up to
    ``tol``.  The oracle pair on the exact events is recorded alongside; a
    bound falling below the oracle value by more than ``tol`` is a mismatch.
    """
    if samples < 1:
        raise ParameterError(f"samples must be >= 1, got {samples}")
    cfg = cfg or OracleConfig.for_point(op)
    env = envelope or Envelope(op)
    rep = DominanceReport("mixed", op, samples, seed, tol)
    for i in range(samples):
        mp = draw_mixed(op, seed, i)
        bound = mixed_upper_bounds(op, mp).as_tuple()
        oracle = diversity_pair(op, MixedCmoHk(mp), cfg).as_tuple()
        params = asdict(mp)
        if oracle[0] > bound[0] + tol or oracle[1] > bound[1] + tol:
            rep.mismatches.append({"index": i, "params": params, "oracle": oracle, "bound": bound})
        ex = _excess(env, bound[0], bound[1], tol)
        rep.max_excess = max(rep.max_excess, ex + tol)
        if ex > 0.0:
            rep.counterexamples.append({
                "index": i, "params": params, "source": "bound", "pair": bound,
                "oracle_pair": oracle,
                "oracle_outside": bool(_excess(env, oracle[0], oracle[1], tol) > 0.0),
                "envelope_d2": float(env.value(bound[0])),
            })
    return rep
