# cython: language_level=3
"""Compiled kernels.  Each expression mirrors ``events.py`` term for term so
the high-SNR results are bit-identical to the numpy fallback."""

import numpy as np
from libc.math cimport log1p, INFINITY


cdef inline double _p(double x) nogil:
    return x if x > 0.0 else 0.0


cdef inline double _mx(double a, double b) nogil:
    return a if a >= b else b


cdef inline bint _hk1(double g11, double g21, double r1, double beta, double t2, double b) nogil:
    cdef double p = _p(beta - g21 - b)
    if r1 > _p(1.0 - g11 - p):
        return True
    return r1 + t2 > _p(_mx(_p(1.0 - g11), _p(beta - g21)) - p)


cdef inline bint _hk2(double g22, double r2, double t2, double b) nogil:
    if r2 > _p(1.0 - g22):
        return True
    return r2 - t2 > _p(1.0 - g22 - b)


cdef inline bint _highsnr(int code, const double[::1] k, int rx,
                          double g11, double g21, double g22) nogil:
    cdef double r1 = k[0], r2 = k[1], beta = k[2]
    cdef double a = k[3], b = k[4], c = k[5], d = k[6]
    cdef double u, m, p, q, bc, tc
    if rx == 1:
        if code == 0:
            return _hk1(g11, g21, r1, beta, a, b)
        if code == 1:
            u = _p(1.0 - g11)
            if r1 > u:
                return True
            return r1 + r2 > _mx(u, _p(beta - g21))
        if code == 2:
            return r1 > _p(1.0 - g11 - _p(beta - g21))
        if code == 3:
            bc = a * b + (1.0 - a) * c
            tc = a * d
            return _hk1(g11, g21, r1, beta, tc, bc)
        u = _p(1.0 - g11)
        m = _mx(u, _p(beta - g21))
        p = _p(beta - g21 - b)
        if r1 > a * u + (1.0 - a) * _p(1.0 - g11 - p):
            return True
        if r1 + a * c > a * m + (1.0 - a) * _p(m - p):
            return True
        return r1 + a * c - (1.0 - a) * d > a * m
    if code == 0:
        return _hk2(g22, r2, a, b)
    if code == 1 or code == 2:
        return r2 > _p(1.0 - g22)
    if code == 3:
        bc = a * b + (1.0 - a) * c
        tc = a * d
        return _hk2(g22, r2, tc, bc)
    u = _p(1.0 - g22)
    q = _p(1.0 - g22 - b)
    if r2 > u:
        return True
    if r2 - a * c > (1.0 - a) * q:
        return True
    return r2 - (1.0 - a) * d > a * u + (1.0 - a) * q


cdef bint _finite(int code, const double[::1] k, int rx,
                  double x11, double x21, double x22) nogil:
    cdef double den, den2, joint, full, priv, lam
    if code <= 2:
        if rx == 1:
            if k[0] * x11 < k[3] * (1.0 + k[1] * x21):
                return True
            return k[0] * x11 + k[2] * x21 < k[4] * (1.0 + k[1] * x21)
        if k[0] * x22 < k[5]:
            return True
        return k[6] * x22 < k[7]
    lam = k[2]
    if code == 3:
        if rx == 1:
            den = 1.0 + k[3] * x21
            den2 = 1.0 + k[5] * x21
            if k[9] > lam * log1p(k[1] * x11 / den) + (1.0 - lam) * log1p(k[1] * x11 / den2):
                return True
            return k[10] > (lam * log1p((k[1] * x11 + k[4] * x21) / den)
                            + (1.0 - lam) * log1p((k[1] * x11 + k[6] * x21) / den2))
        if k[11] > log1p(k[1] * x22):
            return True
        return k[12] > lam * log1p(k[7] * x22) + (1.0 - lam) * log1p(k[8] * x22)
    if rx == 1:
        den = 1.0 + k[4] * x21
        joint = log1p(k[1] * x11 + k[3] * x21)
        if k[7] > lam * log1p(k[1] * x11) + (1.0 - lam) * log1p(k[1] * x11 / den):
            return True
        if k[8] > lam * joint + (1.0 - lam) * log1p((k[1] * x11 + k[5] * x21) / den):
            return True
        return k[9] > lam * joint
    full = log1p(k[1] * x22)
    priv = log1p(k[6] * x22)
    if k[10] > full:
        return True
    if k[11] > (1.0 - lam) * priv:
        return True
    return k[12] > lam * full + (1.0 - lam) * priv


def _check(int code, int rx):
    if code < 0 or code > 4:
        raise ValueError(f"unknown scheme code {code}")
    if rx != 1 and rx != 2:
        raise ValueError(f"unknown receiver {rx}")


def highsnr_mask(int code, const double[::1] params, int receiver,
                 const double[::1] g11, const double[::1] g21, const double[::1] g22):
    _check(code, receiver)
    cdef Py_ssize_t i, n = g11.shape[0]
    out = np.empty(n, dtype=np.uint8)
    cdef unsigned char[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _highsnr(code, params, receiver, g11[i], g21[i], g22[i])
    return out


def g11_threshold(int code, const double[::1] params, int receiver,
                  const double[::1] g21, const double[::1] g22, double hi, int iters):
    _check(code, receiver)
    cdef Py_ssize_t i, n = g21.shape[0]
    cdef int it
    cdef double lo, up, mid
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            if _highsnr(code, params, receiver, 0.0, g21[i], g22[i]):
                o[i] = 0.0
                continue
            if not _highsnr(code, params, receiver, hi, g21[i], g22[i]):
                o[i] = INFINITY
                continue
            lo = 0.0
            up = hi
            for it in range(iters):
                mid = 0.5 * (lo + up)
                if _highsnr(code, params, receiver, mid, g21[i], g22[i]):
                    up = mid
                else:
                    lo = mid
            o[i] = up
    return out


def finite_mask(int code, const double[::1] consts, int receiver, const double[:, ::1] x):
    _check(code, receiver)
    cdef Py_ssize_t i, n = x.shape[0]
    out = np.empty(n, dtype=np.uint8)
    cdef unsigned char[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _finite(code, consts, receiver, x[i, 0], x[i, 1], x[i, 2])
    return out


def finite_count(int code, const double[::1] consts, int receiver, const double[:, ::1] x):
    _check(code, receiver)
    cdef Py_ssize_t i, n = x.shape[0], hits = 0
    with nogil:
        for i in range(n):
            if _finite(code, consts, receiver, x[i, 0], x[i, 1], x[i, 2]):
                hits += 1
    return int(hits)
