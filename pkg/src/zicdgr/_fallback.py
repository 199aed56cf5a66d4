"""Pure-numpy kernel backend; same signatures as the compiled ``_kernels``."""

from __future__ import annotations

import numpy as np

from . import events as ev


def highsnr_mask(code, params, receiver, g11, g21, g22):
    return np.asarray(ev.highsnr_union(code, params, receiver, g11, g21, g22), dtype=np.uint8)


def g11_threshold(code, params, receiver, g21, g22, hi, iters):
    g21 = np.asarray(g21, dtype=np.float64)
    g22 = np.asarray(g22, dtype=np.float64)
    lo = np.zeros_like(g21)
    up = np.full_like(g21, hi)
    at0 = ev.highsnr_union(code, params, receiver, lo, g21, g22)
    athi = ev.highsnr_union(code, params, receiver, up, g21, g22)
    for _ in range(iters):
        mid = 0.5 * (lo + up)
        inside = ev.highsnr_union(code, params, receiver, mid, g21, g22)
        up = np.where(inside, mid, up)
        lo = np.where(inside, lo, mid)
    out = np.where(athi, up, np.inf)
    return np.where(at0, 0.0, out)


def finite_mask(code, consts, receiver, x):
    x = np.asarray(x, dtype=np.float64)
    with np.errstate(invalid="ignore", over="ignore"):
        hit = ev.finite_union(code, consts, receiver, x[:, 0], x[:, 1], x[:, 2])
    return np.asarray(hit, dtype=np.uint8)


def finite_count(code, consts, receiver, x):
    return int(np.count_nonzero(finite_mask(code, consts, receiver, x)))
