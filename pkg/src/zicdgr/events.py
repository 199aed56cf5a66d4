"""Vectorised outage events, high-SNR and finite-SNR, for every scheme.

These are the raw formulas on floats or numpy arrays.  The typed predicates
in :mod:`zicdgr.regions` and the numpy kernel backend are thin wrappers
around them; the compiled kernels in ``_kernels.pyx`` mirror them operation
for operation so both backends agree bit for bit on the high-SNR side.

Scheme codes and flat parameter layout ``[r1, r2, beta, a, b, c, d]``:

======  ===========  ======  ======  ======  ======
code    scheme       a       b       c       d
======  ===========  ======  ======  ======  ======
0       HK           t2      b       -       -
1       CMO          -       -       -       -
2       TIAN         -       -       -       -
3       time share   lam     b1      b2      t21
4       CMO + HK     lam     b       t21     t22
======  ===========  ======  ======  ======  ======
"""

from __future__ import annotations

import numpy as np

HK, CMO, TIAN, TIMESHARE, MIXED = 0, 1, 2, 3, 4
N_PARAMS = 7


def _p(x):
    return np.maximum(x, 0.0)


# --- high-SNR events -------------------------------------------------------


def hk_rx1(g11, g21, r1, beta, t2, b):
    p = _p(beta - g21 - b)
    e1 = r1 > _p(1.0 - g11 - p)
    e2 = r1 + t2 > _p(np.maximum(_p(1.0 - g11), _p(beta - g21)) - p)
    return [e1, e2]


def hk_rx2(g22, r2, t2, b):
    return [r2 > _p(1.0 - g22), r2 - t2 > _p(1.0 - g22 - b)]


def cmo_rx1(g11, g21, r1, r2, beta):
    u = _p(1.0 - g11)
    return [r1 > u, r1 + r2 > np.maximum(u, _p(beta - g21))]


def single_rx2(g22, r2):
    return [r2 > _p(1.0 - g22)]


def tian_rx1(g11, g21, r1, beta):
    return [r1 > _p(1.0 - g11 - _p(beta - g21))]


def timeshare_split(lam, b1, b2, t21):
    """Equivalent ``(b_c, t_c)`` of a two-slot split."""
    return lam * b1 + (1.0 - lam) * b2, lam * t21


def timeshare_rx1(g11, g21, r1, beta, lam, b1, b2, t21):
    bc, tc = timeshare_split(lam, b1, b2, t21)
    return hk_rx1(g11, g21, r1, beta, tc, bc)


def timeshare_rx2(g22, r2, lam, b1, b2, t21):
    bc, tc = timeshare_split(lam, b1, b2, t21)
    return hk_rx2(g22, r2, tc, bc)


def mixed_rx1(g11, g21, r1, beta, lam, b, t21, t22):
    u = _p(1.0 - g11)
    m = np.maximum(u, _p(beta - g21))
    p = _p(beta - g21 - b)
    e1 = r1 > lam * u + (1.0 - lam) * _p(1.0 - g11 - p)
    e2 = r1 + lam * t21 > lam * m + (1.0 - lam) * _p(m - p)
    e3 = r1 + lam * t21 - (1.0 - lam) * t22 > lam * m
    return [e1, e2, e3]


def mixed_rx2(g22, r2, lam, b, t21, t22):
    u = _p(1.0 - g22)
    q = _p(1.0 - g22 - b)
    f1 = r2 > u
    f2 = r2 - lam * t21 > (1.0 - lam) * q
    f3 = r2 - (1.0 - lam) * t22 > lam * u + (1.0 - lam) * q
    return [f1, f2, f3]


def highsnr_events(code, params, receiver, g11, g21, g22):
    """List of boolean event arrays for ``code``/``receiver`` at the exponents."""
    r1, r2, beta, a, b, c, d = (float(v) for v in params)
    if receiver == 1:
        if code == HK:
            return hk_rx1(g11, g21, r1, beta, a, b)
        if code == CMO:
            return cmo_rx1(g11, g21, r1, r2, beta)
        if code == TIAN:
            return tian_rx1(g11, g21, r1, beta)
        if code == TIMESHARE:
            return timeshare_rx1(g11, g21, r1, beta, a, b, c, d)
        if code == MIXED:
            return mixed_rx1(g11, g21, r1, beta, a, b, c, d)
    elif receiver == 2:
        if code == HK:
            return hk_rx2(g22, r2, a, b)
        if code in (CMO, TIAN):
            return single_rx2(g22, r2)
        if code == TIMESHARE:
            return timeshare_rx2(g22, r2, a, b, c, d)
        if code == MIXED:
            return mixed_rx2(g22, r2, a, b, c, d)
    raise ValueError(f"unknown scheme code {code} / receiver {receiver}")


def highsnr_union(code, params, receiver, g11, g21, g22):
    out = None
    for ev in highsnr_events(code, params, receiver, g11, g21, g22):
        out = ev if out is None else (out | ev)
    return out


# --- finite-SNR events -----------------------------------------------------
#
# Rates and capacities are in nats; the log base cancels in every exponent.
# Codes 0-2 reduce to linear tests on the channel powers with the layout
#   [S, Ia, Ic, A1, A12, A2, Sa, As]
# where S = SNR, Ia is the private interference power at RX1, Ic the
# interference power counted in the joint event, A* = exp(rate) - 1 and Sa
# the private signal power at RX2.
# Code 3 layout: [L, S, lam, Ia1, Ic1, Ia2, Ic2, Sa1, Sa2, R1, R12, R2, R2s]
# Code 4 layout: [L, S, lam, I, Ia, Ic, Sa, R1, R12, R13, R2, R22, R23]


def linear_rx1(x11, x21, k):
    S, Ia, Ic, A1, A12 = k[0], k[1], k[2], k[3], k[4]
    e1 = S * x11 < A1 * (1.0 + Ia * x21)
    e2 = S * x11 + Ic * x21 < A12 * (1.0 + Ia * x21)
    return [e1, e2]


def linear_rx2(x22, k):
    S, A2, Sa, As = k[0], k[5], k[6], k[7]
    return [S * x22 < A2, Sa * x22 < As]


def timeshare_finite_rx1(x11, x21, k):
    S, lam = k[1], k[2]
    Ia1, Ic1, Ia2, Ic2 = k[3], k[4], k[5], k[6]
    R1, R12 = k[9], k[10]
    d1 = 1.0 + Ia1 * x21
    d2 = 1.0 + Ia2 * x21
    e1 = R1 > lam * np.log1p(S * x11 / d1) + (1.0 - lam) * np.log1p(S * x11 / d2)
    e2 = R12 > (
        lam * np.log1p((S * x11 + Ic1 * x21) / d1)
        + (1.0 - lam) * np.log1p((S * x11 + Ic2 * x21) / d2)
    )
    return [e1, e2]


def timeshare_finite_rx2(x22, k):
    S, lam, Sa1, Sa2, R2, R2s = k[1], k[2], k[7], k[8], k[11], k[12]
    f1 = R2 > np.log1p(S * x22)
    f2 = R2s > lam * np.log1p(Sa1 * x22) + (1.0 - lam) * np.log1p(Sa2 * x22)
    return [f1, f2]


def mixed_finite_rx1(x11, x21, k):
    S, lam, I, Ia, Ic = k[1], k[2], k[3], k[4], k[5]
    R1, R12, R13 = k[7], k[8], k[9]
    den = 1.0 + Ia * x21
    joint = np.log1p(S * x11 + I * x21)
    e1 = R1 > lam * np.log1p(S * x11) + (1.0 - lam) * np.log1p(S * x11 / den)
    e2 = R12 > lam * joint + (1.0 - lam) * np.log1p((S * x11 + Ic * x21) / den)
    e3 = R13 > lam * joint
    return [e1, e2, e3]


def mixed_finite_rx2(x22, k):
    S, lam, Sa = k[1], k[2], k[6]
    R2, R22, R23 = k[10], k[11], k[12]
    full = np.log1p(S * x22)
    priv = np.log1p(Sa * x22)
    return [R2 > full, R22 > (1.0 - lam) * priv, R23 > lam * full + (1.0 - lam) * priv]


def finite_events(code, consts, receiver, x11, x21, x22):
    if code in (HK, CMO, TIAN):
        return linear_rx1(x11, x21, consts) if receiver == 1 else linear_rx2(x22, consts)
    if code == TIMESHARE:
        return timeshare_finite_rx1(x11, x21, consts) if receiver == 1 else timeshare_finite_rx2(x22, consts)
    if code == MIXED:
        return mixed_finite_rx1(x11, x21, consts) if receiver == 1 else mixed_finite_rx2(x22, consts)
    raise ValueError(f"unknown scheme code {code}")


def finite_union(code, consts, receiver, x11, x21, x22):
    out = None
    for ev in finite_events(code, consts, receiver, x11, x21, x22):
        out = ev if out is None else (out | ev)
    return out
