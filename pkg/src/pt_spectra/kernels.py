"""Taylor-series integrator for v'' = q(z) v along a straight complex segment.

q is a polynomial, so around any point the Taylor coefficients of v obey

    (k+2)(k+1) c_{k+2} = sum_j q_j c_{k-j},

with q_j the coefficients of q re-expanded about that point.  The state is
kept as a normalised pair (v, v') plus a real log-magnitude so that the
exponentially large solutions met at large |lambda| never overflow.

Two implementations share this contract: a numba kernel and a numpy
fallback.  Set PT_SPECTRA_DISABLE_NUMBA=1 to force the fallback.
"""
from __future__ import annotations

import math
import os

import numpy as np

__all__ = [
    "NUMBA_ENABLED",
    "taylor_segment",
    "taylor_segment_numba",
    "taylor_segment_numpy",
    "series_power",
    "series_power_numpy",
]


def _flag(name):
    return os.environ.get(name, "").strip().lower() in {"1", "true", "yes", "on"}


def taylor_segment_numpy(q, z0, z1, v, dv, order, rtol, max_steps):
    """Integrate from z0 to z1.  ``q`` holds ascending coefficients of q(z).

    Returns (v, dv, log_scale, n_steps); the true solution is
    exp(log_scale) * (v, dv).  n_steps < 0 flags step-size underflow or
    exhaustion of max_steps.
    """
    deg = q.size - 1
    span = z1 - z0
    length = abs(span)
    if length == 0.0:
        return v, dv, 0.0, 0
    u = span / length
    s = abs(v) + abs(dv)
    v, dv = v / s, dv / s
    log_scale = math.log(s)
    t = 0.0
    steps = 0
    c = np.zeros(order + 1, dtype=np.complex128)
    qs = np.empty(deg + 1, dtype=np.complex128)
    k_idx = np.arange(order + 1)
    shrink = rtol ** (1.0 / order)
    while t < length:
        if steps >= max_steps:
            return v, dv, log_scale, -1
        zc = z0 + t * u
        # re-expand q about zc (repeated synthetic division)
        qs[:] = q
        for i in range(deg):
            for jj in range(deg - 1, i - 1, -1):
                qs[jj] += zc * qs[jj + 1]
        c[0] = v
        c[1] = dv
        for k in range(order - 1):
            lo = max(0, k - deg)
            c[k + 2] = np.dot(qs[: k - lo + 1], c[k:lo - 1 if lo > 0 else None:-1]) / ((k + 2) * (k + 1))
        a_last = abs(c[order])
        a_prev = abs(c[order - 1])
        r = math.inf
        if a_last > 0:
            r = min(r, a_last ** (-1.0 / order))
        if a_prev > 0:
            r = min(r, a_prev ** (-1.0 / (order - 1)))
        h = min(shrink * r, length - t)
        if h <= 1e-14 * length:
            return v, dv, log_scale, -2
        hu = h * u
        powers = hu ** k_idx
        v_new = np.dot(c, powers)
        dv_new = np.dot(c[1:] * k_idx[1:], powers[:-1])
        s = abs(v_new) + abs(dv_new)
        v, dv = v_new / s, dv_new / s
        log_scale += math.log(s)
        t += h
        steps += 1
    return v, dv, log_scale, steps


def _taylor_segment_loops(q, z0, z1, v, dv, order, rtol, max_steps):
    deg = q.shape[0] - 1
    span = z1 - z0
    length = abs(span)
    if length == 0.0:
        return v, dv, 0.0, 0
    u = span / length
    s = abs(v) + abs(dv)
    v = v / s
    dv = dv / s
    log_scale = math.log(s)
    t = 0.0
    steps = 0
    c = np.zeros(order + 1, dtype=np.complex128)
    qs = np.empty(deg + 1, dtype=np.complex128)
    shrink = rtol ** (1.0 / order)
    while t < length:
        if steps >= max_steps:
            return v, dv, log_scale, -1
        zc = z0 + t * u
        for i in range(deg + 1):
            qs[i] = q[i]
        for i in range(deg):
            for jj in range(deg - 1, i - 1, -1):
                qs[jj] += zc * qs[jj + 1]
        c[0] = v
        c[1] = dv
        for k in range(order - 1):
            acc = 0j
            top = k if k < deg else deg
            for j in range(top + 1):
                acc += qs[j] * c[k - j]
            c[k + 2] = acc / ((k + 2) * (k + 1))
        a_last = abs(c[order])
        a_prev = abs(c[order - 1])
        r = math.inf
        if a_last > 0:
            r = min(r, a_last ** (-1.0 / order))
        if a_prev > 0:
            r = min(r, a_prev ** (-1.0 / (order - 1)))
        h = min(shrink * r, length - t)
        if h <= 1e-14 * length:
            return v, dv, log_scale, -2
        hu = h * u
        # Horner for the value and the derivative together
        v_new = c[order]
        dv_new = 0j
        for k in range(order - 1, -1, -1):
            dv_new = dv_new * hu + v_new
            v_new = v_new * hu + c[k]
        s = abs(v_new) + abs(dv_new)
        v = v_new / s
        dv = dv_new / s
        log_scale += math.log(s)
        t += h
        steps += 1
    return v, dv, log_scale, steps


def series_power_numpy(c, alpha):
    """Coefficients of (1 + s)^alpha for s with zero constant term (Miller recurrence)."""
    n_max = c.size - 1
    f = np.zeros(n_max + 1, dtype=np.complex128)
    f[0] = 1.0
    for n in range(1, n_max + 1):
        k = np.arange(1, n + 1)
        f[n] = np.sum((alpha * k - (n - k)) * c[k] * f[n - k]) / n
    return f


def _series_power_loops(c, alpha):
    n_max = c.shape[0] - 1
    f = np.zeros(n_max + 1, dtype=np.complex128)
    f[0] = 1.0
    for n in range(1, n_max + 1):
        acc = 0j
        for k in range(1, n + 1):
            acc += (alpha * k - (n - k)) * c[k] * f[n - k]
        f[n] = acc / n
    return f


try:
    if _flag("PT_SPECTRA_DISABLE_NUMBA"):
        raise ImportError("disabled by environment")
    from numba import njit

    taylor_segment_numba = njit(cache=True, nogil=True)(_taylor_segment_loops)
    series_power_numba = njit(cache=True, nogil=True)(_series_power_loops)
    NUMBA_ENABLED = True
except ImportError:
    taylor_segment_numba = series_power_numba = None
    NUMBA_ENABLED = False


def series_power(c, alpha):
    c = np.ascontiguousarray(c, dtype=np.complex128)
    if NUMBA_ENABLED:
        return series_power_numba(c, float(alpha))
    return series_power_numpy(c, float(alpha))


def taylor_segment(q, z0, z1, v, dv, order=30, rtol=1e-14, max_steps=200_000):
    q = np.ascontiguousarray(q, dtype=np.complex128)
    args = (q, complex(z0), complex(z1), complex(v), complex(dv), int(order), float(rtol), int(max_steps))
    if NUMBA_ENABLED:
        return taylor_segment_numba(*args)
    return taylor_segment_numpy(*args)
