"""Finite-SNR outage probabilities and empirical diversity slopes.

Channel powers ``|h_ij|^2`` are independent unit-mean exponentials.  Two
engines compute ``P_out`` at a given SNR:

* quadrature: the outage set is an interval ``[0, thr)`` in the direct-link
  power, so the inner integral is an exponential CDF and only a 1-D
  integral over ``|h21|^2`` is left for receiver 1;
* Monte Carlo: counter-based sampling in fixed-size blocks, so the estimate
  does not depend on how blocks are scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize

from . import events as ev
from ._backend import backend
from .model import OperatingPoint, ParameterError
from .regions import Scheme, finite_constants, scheme_code

__all__ = [
    "QuadratureError",
    "SnrLadder",
    "outage_prob_quadrature",
    "outage_prob_montecarlo",
    "build_ladder",
    "fit_diversity",
    "parse_snr_range",
]

X_MAX = 40.0
BLOCK = 1 << 16
Z95 = 1.96


class QuadratureError(RuntimeError):
    """Integration did not reach the requested accuracy.

    Attributes:
        estimate: The integrator's value when it stopped.
        error: Its error estimate.
    """

    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(f"{message} (estimate={estimate:.6g}, error={error:.3g})")
        self.estimate = estimate
        self.error = error


def _check_rx(receiver: int) -> None:
    if receiver not in (1, 2):
        raise ParameterError(f"receiver must be 1 or 2, got {receiver!r}")


def _root(f, target: float) -> float:
    """Smallest ``x >= 0`` with ``f(x) >= target`` for increasing ``f``."""
    if f(0.0) >= target:
        return 0.0
    hi = 1.0
    while f(hi) < target:
        hi *= 4.0
        if hi > 1e300:
            return math.inf
    return optimize.brentq(lambda x: f(x) - target, 0.0, hi, xtol=1e-300, rtol=1e-15, maxiter=400)


def _rx2_threshold(code: int, k: np.ndarray) -> float:
    """Outage iff ``|h22|^2 < threshold``."""
    if code in (ev.HK, ev.CMO, ev.TIAN):
        thr = k[5] / k[0]
        if k[6] > 0.0 and k[7] > 0.0:
            thr = max(thr, k[7] / k[6])
        return thr
    S, lam = k[1], k[2]
    if code == ev.TIMESHARE:
        Sa1, Sa2, R2, R2s = k[7], k[8], k[11], k[12]
        t = math.expm1(R2) / S
        f = lambda x: lam * math.log1p(Sa1 * x) + (1.0 - lam) * math.log1p(Sa2 * x)  # noqa: E731
        return max(t, _root(f, R2s) if R2s > 0.0 else 0.0)
    Sa, R2, R22, R23 = k[6], k[10], k[11], k[12]
    t = math.expm1(R2) / S
    if R22 > 0.0 and lam < 1.0:
        t = max(t, math.expm1(R22 / (1.0 - lam)) / Sa)
    if R23 > 0.0:
        f = lambda x: lam * math.log1p(S * x) + (1.0 - lam) * math.log1p(Sa * x)  # noqa: E731
        t = max(t, _root(f, R23))
    return t


def _rx1_linear(k: np.ndarray):
    S, Ia, Ic, A1, A12 = k[0], k[1], k[2], k[3], k[4]

    def thr(y: float) -> float:
        den = 1.0 + Ia * y
        return max(A1 * den / S, (A12 * den - Ic * y) / S, 0.0)

    kinks = []
    g = Ic - A12 * Ia
    if g > 0.0 and A12 > 0.0:
        kinks.append(A12 / g)
    g2 = Ic - (A12 - A1) * Ia
    if g2 > 0.0 and A12 > A1:
        kinks.append((A12 - A1) / g2)
    return thr, [x for x in kinks if 0.0 < x < X_MAX]


def _rx1_log(code: int, k: np.ndarray):
    S, lam = k[1], k[2]
    if code == ev.TIMESHARE:
        Ia1, Ic1, Ia2, Ic2, R1, R12 = k[3], k[4], k[5], k[6], k[9], k[10]

        def thr(y: float) -> float:
            d1, d2 = 1.0 + Ia1 * y, 1.0 + Ia2 * y
            f1 = lambda x: lam * math.log1p(S * x / d1) + (1.0 - lam) * math.log1p(S * x / d2)  # noqa: E731
            f2 = lambda x: (lam * math.log1p((S * x + Ic1 * y) / d1)  # noqa: E731
                            + (1.0 - lam) * math.log1p((S * x + Ic2 * y) / d2))
            return max(_root(f1, R1) if R1 > 0.0 else 0.0, _root(f2, R12) if R12 > 0.0 else 0.0)

        return thr, []
    I, Ia, Ic, R1, R12, R13 = k[3], k[4], k[5], k[7], k[8], k[9]

    def thr(y: float) -> float:
        den = 1.0 + Ia * y
        f1 = lambda x: lam * math.log1p(S * x) + (1.0 - lam) * math.log1p(S * x / den)  # noqa: E731
        f2 = lambda x: (lam * math.log1p(S * x + I * y)  # noqa: E731
                        + (1.0 - lam) * math.log1p((S * x + Ic * y) / den))
        f3 = lambda x: lam * math.log1p(S * x + I * y)  # noqa: E731
        out = 0.0
        for f, R in ((f1, R1), (f2, R12), (f3, R13)):
            if R > 0.0:
                out = max(out, _root(f, R))
        return out

    return thr, []


def outage_prob_quadrature(
    op: OperatingPoint, scheme: Scheme, receiver: int, snr_db: float, tol: float = 1e-12
) -> float:
    """Outage probability by deterministic integration.

    Args:
        tol: Absolute error target passed to the integrator.

    Raises:
        QuadratureError: if the integrator reports failure or an error
            estimate above ``tol``.
    """
    _check_rx(receiver)
    if not tol > 0.0:
        raise ParameterError(f"tol must be > 0, got {tol}")
    code = scheme_code(scheme)
    k = finite_constants(op, scheme, snr_db)
    if receiver == 2:
        return float(-math.expm1(-_rx2_threshold(code, k)))
    thr, kinks = _rx1_linear(k) if code <= ev.TIAN else _rx1_log(code, k)

    def integrand(y: float) -> float:
        t = thr(y)
        return math.exp(-y) * (1.0 if math.isinf(t) else -math.expm1(-t))

    val, err, info, *msg = integrate.quad(
        integrand, 0.0, X_MAX, points=sorted(kinks) or None,
        epsabs=tol, epsrel=0.0, limit=400, full_output=1,
    )
    if msg or err > tol:
        raise QuadratureError(msg[0] if msg else "error estimate above tol", val, err)
    return float(min(max(val, 0.0), 1.0))


def outage_prob_montecarlo(
    op: OperatingPoint, scheme: Scheme, receiver: int, snr_db: float, trials: int, seed: int = 0
) -> tuple[float, float]:
    """Empirical outage rate and its 95% normal-approximation half-width.

    Block ``j`` of ``2^16`` draws comes from Philox keyed by ``seed`` with
    counter ``j << 64``; the result is bitwise reproducible.
    """
    _check_rx(receiver)
    trials = int(trials)
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}")
    code = scheme_code(scheme)
    k = finite_constants(op, scheme, snr_db)
    be = backend()
    hits = 0
    done = 0
    j = 0
    while done < trials:
        n = min(BLOCK, trials - done)
        g = np.random.Generator(np.random.Philox(key=int(seed), counter=j << 64))
        x = g.standard_exponential((n, 3))
        hits += be.finite_count(code, k, receiver, x)
        done += n
        j += 1
    p = hits / trials
    return p, Z95 * math.sqrt(p * (1.0 - p) / trials)


@dataclass
class SnrLadder:
    """Outage probabilities over an ascending SNR ladder.

    ``probs`` maps receiver number to an array aligned with ``points_db``;
    ``half_widths`` is filled for Monte Carlo ladders.
    """

    points_db: np.ndarray
    probs: dict
    method: str = "quadrature"
    half_widths: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.points_db = np.asarray(self.points_db, dtype=np.float64)
        if self.points_db.ndim != 1 or self.points_db.size == 0:
            raise ParameterError("ladder needs a 1-D list of SNR points")
        if np.any(np.diff(self.points_db) <= 0.0):
            raise ParameterError("ladder SNR points must be strictly ascending")
        self.probs = {int(r): np.asarray(p, dtype=np.float64) for r, p in self.probs.items()}
        for r, p in self.probs.items():
            if p.shape != self.points_db.shape:
                raise ParameterError(f"receiver {r}: probabilities do not match the ladder")
            if np.any(p < 0.0) or np.any(p > 1.0):
                raise ParameterError(f"receiver {r}: probabilities must lie in [0, 1]")

    def fit(self, receiver: int | None = None) -> tuple[float, float, float]:
        """``(slope, intercept, residual)`` of ``log10 P`` against ``log10 SNR``."""
        p = self._pick(receiver)
        n = self.points_db.size
        if n < 3:
            raise ParameterError("fit needs at least 3 ladder points")
        m = max(3, (n + 1) // 2)
        x = self.points_db[-m:] / 10.0
        y = p[-m:]
        if np.any(y <= 0.0):
            raise ParameterError("zero outage probability in the fit window; raise trials or lower SNR")
        y = np.log10(y)
        (slope, intercept), res, *_ = np.polyfit(x, y, 1, full=True)
        rms = math.sqrt(float(res[0]) / m) if res.size else 0.0
        return float(slope), float(intercept), rms

    def _pick(self, receiver: int | None) -> np.ndarray:
        if receiver is None:
            if len(self.probs) != 1:
                raise ParameterError("ladder holds several receivers; name one")
            return next(iter(self.probs.values()))
        return self.probs[int(receiver)]


def fit_diversity(ladder: SnrLadder, receiver: int | None = None) -> tuple[float, float]:
    """Estimated diversity ``-slope`` over the upper half of the ladder.

    Returns:
        ``(d_hat, residual)`` with the residual as RMS in ``log10 P``.
    """
    slope, _, rms = ladder.fit(receiver)
    return -slope, rms


def build_ladder(
    op: OperatingPoint,
    scheme: Scheme,
    points_db,
    method: str = "quadrature",
    receivers=(1, 2),
    trials: int = 10**6,
    seed: int = 0,
    tol: float = 1e-12,
) -> SnrLadder:
    """Evaluate ``P_out`` at every ladder point for the chosen receivers."""
    pts = [float(s) for s in points_db]
    probs, hws = {}, {}
    for rx in receivers:
        if method == "quadrature":
            probs[rx] = [outage_prob_quadrature(op, scheme, rx, s, tol) for s in pts]
        elif method == "montecarlo":
            # distinct counter streams per point and receiver
            res = [
                outage_prob_montecarlo(op, scheme, rx, s, trials, seed + 1000 * i + rx)
                for i, s in enumerate(pts)
            ]
            probs[rx] = [r[0] for r in res]
            hws[rx] = np.array([r[1] for r in res])
        else:
            raise ParameterError(f"unknown method {method!r}")
    return SnrLadder(np.array(pts), probs, method, hws)


def parse_snr_range(spec: str) -> list[float]:
    """Parse ``start:step:stop`` (inclusive) into a list of dB values."""
    try:
        start, step, stop = (float(v) for v in spec.split(":"))
    except ValueError:
        raise ParameterError(f"expected start:step:stop, got {spec!r}") from None
    if not step > 0.0 or stop < start:
        raise ParameterError(f"bad SNR range {spec!r}")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(n)]
