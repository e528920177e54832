"""Asymptotic boundary data for the subdominant solution f(z, a, lambda).

f is normalised by f ~ z^(r_m) exp(-F(z)) as z -> +inf.  Its logarithmic
derivative y = f'/f solves the Riccati equation y' + y^2 = Q with
Q = z^m + P(z) + lambda, and has the formal WKB expansion

    y = y_0 + y_1 + y_2 + ...,   y_0 = -sqrt(Q),   y_n = z^(alpha_n) S_n(1/z),
    alpha_n = m/2 - n (m/2 + 1),

where every S_n is a convergent power series in x = 1/z for |z| > max|root of Q|.
Integrating y from R to infinity against the normalisation gives log f(R)
to the accuracy of the first dropped WKB term.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..errors import SeedAccuracyError, SingularInputError
from ..potential import Potential, branch_pow, omega, rotate_coeffs
from ..series import TruncatedSeries, binom_power, compute_mu_nu, _u_series

__all__ = ["Seed", "F_phase", "wkb_series", "seed_from_frame", "boundary_seed", "frame"]


def frame(p, lam, k):
    """Coefficients and eigenparameter seen by f_k: (G^k(a), omega^(-mk) lambda)."""
    m = p.degree
    k = int(k)
    # omega^(-mk) = omega^(2k) since omega^(m+2) = 1
    return rotate_coeffs(p, k), complex(lam) * _unit(2 * k, m + 2)


def _unit(e, n):
    e %= n
    if 4 * e % n == 0:
        return (1, 1j, -1, -1j)[4 * e // n]
    return cmath.exp(2j * math.pi * e / n)


def F_phase(z, p, lam=None):
    """F(z) = 2/(m+2) z^(m/2+1) + sum_{1<=j<m/2+1} 2/(m+2-2j) b_j z^((m+2-2j)/2)."""
    z = complex(z)
    if z == 0:
        raise SingularInputError("F is evaluated for z != 0 only")
    m = p.degree
    b = _b_const(p, (m + 1) // 2)
    out = 2 / (m + 2) * branch_pow(z, m / 2 + 1)
    for j in range(1, (m + 1) // 2 + 1):
        out += 2 / (m + 2 - 2 * j) * b[j] * branch_pow(z, (m + 2 - 2 * j) / 2)
    return complex(out)


def _b_const(p, J):
    return binom_power(_u_series(p, J), 0.5).coeffs


def wkb_series(p, lam, n_terms, order):
    """Series S_0..S_{n_terms} (arrays of length order+1) and exponents alpha_n."""
    m = p.degree
    tail = _u_series(p, order, lam)
    U = tail + 1
    S0 = -binom_power(tail, 0.5)
    i = np.arange(order + 1)
    u = U.coeffs
    mask = i <= m
    U1 = TruncatedSeries(np.where(mask, (m - i) * u, 0))
    S = [S0, -U1 / (4 * U)]
    alphas = [m / 2 - n * (m / 2 + 1) for n in range(n_terms + 1)]
    inv = (2 * S0).reciprocal()
    for n in range(2, n_terms + 1):
        a_prev = alphas[n - 1]
        acc = TruncatedSeries((a_prev - i) * S[n - 1].coeffs)
        for j in range(1, n):
            acc = acc + S[j] * S[n - j]
        S.append(-acc * inv)
    return [s.coeffs for s in S[: n_terms + 1]], alphas


@dataclass(frozen=True)
class Seed:
    """log f and f'/f for f_k at z0 = R omega^k (derivative taken in z)."""

    z0: complex
    log_f: complex
    ratio: complex
    radius: float
    error_estimate: float
    wkb_order: int

    def value(self):
        return cmath.exp(self.log_f)

    def derivative(self):
        return self.ratio * cmath.exp(self.log_f)


def seed_from_frame(pk, lamk, R, wkb_order=8, series_order=60, roots=None):
    """log f(R) and f'(R)/f(R) for f = f(., pk.a, lamk) on the positive axis."""
    m = pk.degree
    R = float(R)
    r_m = compute_mu_nu(pk)[2]
    if roots is None:
        roots = np.roots(pk.poly_with(lamk))
    x = 1.0 / R
    if np.max(np.abs(roots)) * x >= 1:
        raise SeedAccuracyError(f"start radius {R} lies inside the turning-point disk")
    log_u = complex(np.sum(np.log(1 - roots * x)))
    sqrt_u = cmath.exp(0.5 * log_u)
    qpoly = pk.poly_with(lamk)
    Q = np.polyval(qpoly, R)
    dQ = np.polyval(np.polyder(qpoly), R)

    if wkb_order <= 0:
        b = _b_const(pk, (m + 1) // 2)
        F = _F_real(m, b, R)
        return complex(r_m * math.log(R) - F), complex(-(R ** (m / 2))), math.inf

    S, alphas = wkb_series(pk, lamk, wkb_order, series_order)
    b = -S[0]
    F = _F_real(m, b, R)
    j = np.arange(m // 2 + 2, series_order + 1)
    T = np.sum(b[j] * R ** (m / 2 - j + 1) / (j - m / 2 - 1))
    log_f = r_m * math.log(R) - F + T - 0.25 * log_u
    ratio = -(R ** (m / 2)) * sqrt_u - dQ / (4 * Q)
    k = np.arange(series_order + 1)
    last_int = last_y = 0.0
    for n in range(2, wkb_order + 1):
        a = alphas[n]
        integral = np.sum(S[n] * R ** (a - k + 1) / (k - a - 1))
        y_n = R**a * np.polyval(S[n][::-1], x)
        log_f -= integral
        ratio += y_n
        last_int, last_y = abs(integral), abs(y_n)
    err = max(last_int, last_y / abs(ratio))
    # truncation of the x-series themselves
    err = max(err, float(np.max(np.abs(S[-1][-4:]))) * x ** (series_order - 3) * R ** alphas[-1])
    return complex(log_f), complex(ratio), err


def _F_real(m, b, R):
    F = 2 / (m + 2) * R ** (m / 2 + 1)
    for j in range(1, (m + 1) // 2 + 1):
        F += 2 / (m + 2 - 2 * j) * b[j] * R ** ((m + 2 - 2 * j) / 2)
    return F


def boundary_seed(p, lam, k, R, wkb_order=8, series_order=60, tol=None):
    """Seed for f_k at z = R omega^k in the original z-frame."""
    m = p.degree
    k = int(getattr(k, "k", k))
    pk, lamk = frame(p, lam, k)
    log_f, ratio, err = seed_from_frame(pk, lamk, R, wkb_order, series_order)
    if tol is not None and err > tol:
        raise SeedAccuracyError(
            f"seed error estimate {err:.2e} exceeds {tol:.1e} at R={R}; increase start_radius"
        )
    w = _unit(k, m + 2)
    # f_k(z) = f(omega^-k z, ...) so d/dz brings a factor omega^-k
    return Seed(
        z0=complex(R * w),
        log_f=log_f,
        ratio=ratio / w,
        radius=float(R),
        error_estimate=float(err),
        wkb_order=int(wkb_order),
    )
