"""Large-n eigenvalue expansion and the quantization-condition predictor.

The chain is K_{m,j} -> c_{m,j} -> d_{m,j} -> e_l.  With x = lambda_{0,n}^(-1/m)
and lambda_n = lambda_{0,n} (1 + delta(x)), the truncated quantization
condition becomes the formal identity

    (1 + delta)^(p_0) + sum_j d_j x^j (1 + delta)^(p_j) = 1,   p_j = 1/2 + (1-j)/m,

and e_l are the coefficients of delta.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import binom, gamma

from .errors import NoRootError, PTSpectraError
from .potential import Potential, branch_pow, omega, rotate_coeffs
from .quadrature import DEFAULT, K_m_closed, K_mj, QuadratureConfig
from .series import TruncatedSeries, binom_power, compute_b, compute_mu_nu, ladder_depth

__all__ = [
    "ExpansionTable",
    "Prediction",
    "exponents",
    "compute_c",
    "compute_c_m3",
    "compute_d",
    "compute_d_m3",
    "compute_e",
    "e_closed_forms",
    "lambda0",
    "level_spacing",
    "bender_constant_check",
    "build_table",
    "predict_expansion",
    "predict_quantization",
    "predict",
]


def exponents(m):
    """p_j = 1/2 + (1-j)/m for j = 0..floor(m/2)+1."""
    return [0.5 + (1 - j) / m for j in range(ladder_depth(m) + 1)]


def _rhs(m, n, Km):
    return (2 * n + 1) * math.pi / (2 * Km * math.sin(2 * math.pi / m))


def lambda0(m, n, Km=None):
    """lambda_{0,n} = ((n + 1/2) pi / (K_m sin(2 pi/m)))^(2m/(m+2))."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if Km is None:
        Km = K_m_closed(m)
    return _rhs(m, n, Km) ** (2 * m / (m + 2))


def level_spacing(m, lam0, Km=None):
    """Leading-order gap lambda_{n+1} - lambda_n at lambda_{0,n} = lam0."""
    if Km is None:
        Km = K_m_closed(m)
    return 2 * m * math.pi / ((m + 2) * Km * math.sin(2 * math.pi / m)) * lam0 ** (0.5 - 1 / m)


def bender_constant_check(m, tol=1e-12):
    """Ratio of the two leading-order growth constants; analytically 1."""
    Km = K_m_closed(m)
    lhs = math.sqrt(math.pi) * gamma(1.5 + 1 / m) / (math.sin(math.pi / m) * gamma(1 + 1 / m))
    rhs = math.pi / (Km * math.sin(2 * math.pi / m))
    ratio = lhs / rhs
    if tol is not None and abs(ratio - 1) >= tol:
        raise PTSpectraError(f"leading constants disagree for m={m}: ratio {ratio!r}")
    return ratio


# ---------------------------------------------------------------- c, d

def _log_slot(m):
    return m // 2 + 1 if m % 2 == 0 else None


def compute_c(p, K_plus, K_minus):
    """c_{m,j}(a) for j = 1..floor(m/2)+1.

    ``K_plus[j-1] = K_{m,j}(G(a))`` and ``K_minus[j-1] = K_{m,j}(G^-1(a))``.
    """
    m = p.degree
    depth = ladder_depth(m)
    if len(K_plus) != depth or len(K_minus) != depth:
        raise ValueError(f"need {depth} rotated K-constants on each side")
    w2 = omega(m) ** 2
    ps = exponents(m)
    out = []
    for j in range(1, depth + 1):
        if j == _log_slot(m):
            # the ln(lambda) parts combine into a constant since
            # b_{m/2+1}(G(a)) = b_{m/2+1}(G^-1(a)) = -b_{m/2+1}(a)
            b = compute_b(p, j)[-1][0]
            out.append(K_plus[j - 1] - K_minus[j - 1] + b / m * 8j * math.pi / (m + 2))
        else:
            out.append(
                K_plus[j - 1] * branch_pow(w2, ps[j]) - K_minus[j - 1] * branch_pow(1 / w2, ps[j])
            )
    return [complex(c) for c in out]


def compute_d(p, c, nu=None, Km=None):
    """d_{m,j}(a); at the even-m slot j = m/2+1 the nu-term is added."""
    m = p.degree
    if Km is None:
        Km = K_m_closed(m)
    if nu is None:
        nu = compute_mu_nu(p)[1]
    scale = 2j * Km * math.sin(2 * math.pi / m)
    out = []
    for j, cj in enumerate(c, start=1):
        if j == _log_slot(m):
            cj = cj + 4 * nu / (m + 2) * math.pi * 1j
        out.append(complex(cj / scale))
    return out


def compute_c_m3(K_g4, K_g2):
    """Constants of the m=3 condition, built from K_{3,j}(G^4 a) and K_{3,j}(G^2 a).

    The condition reads
        -2i K_3 sin(2pi/3) lam^(5/6) + c'_1 lam^(1/2) + c'_2 lam^(1/6) = -(2n+1) pi i,
    which is the generic (2n+1) form after dividing by -2i K_3 sin(2pi/3).
    """
    w = omega(3)
    ps = exponents(3)
    return [
        complex(K_g4[j - 1] * branch_pow(w**-2, ps[j]) + K_g2[j - 1] * branch_pow(w**-1, ps[j]))
        for j in (1, 2)
    ]


def compute_d_m3(c_m3, Km=None):
    if Km is None:
        Km = K_m_closed(3)
    scale = -2j * Km * math.sin(2 * math.pi / 3)
    return [complex(c / scale) for c in c_m3]


# ---------------------------------------------------------------- e

def compute_e(d, m, max_iter=None):
    """e_1..e_J from d_1..d_J (J = floor(m/2)+1) by formal fixed-point iteration."""
    J = ladder_depth(m)
    if len(d) != J:
        raise ValueError(f"expected {J} d-coefficients, got {len(d)}")
    d = [complex(v) for v in d]
    ps = exponents(m)
    x = TruncatedSeries.variable(J)
    delta = TruncatedSeries.constant(0, J)
    xj = [x**j for j in range(J + 1)]
    # pass k fixes the coefficient of x^k, so J passes suffice; the extra
    # passes only confirm that the fixed point has settled
    max_iter = max_iter or J + 2
    scale = 1.0 + max(abs(v) for v in d) ** J
    for it in range(max_iter):
        resid = binom_power(delta, ps[0]) - 1
        for j in range(1, J + 1):
            resid = resid + d[j - 1] * xj[j] * binom_power(delta, ps[j])
        if it >= J and np.max(np.abs(resid.coeffs)) <= 1e-13 * scale:
            return [complex(v) for v in delta.coeffs[1:]]
        delta = delta - resid / ps[0]
    raise PTSpectraError("formal fixed point for e_l did not settle")


def e_closed_forms(d, m):
    """Hand-derived e_1, e_2."""
    q = 2 * m / (m + 2)
    e1 = -q * d[0]
    e2 = -q * d[1] + (2 * m**2 / (m + 2) ** 2 - q**3 * binom(0.5 + 1 / m, 2)) * d[0] ** 2
    return complex(e1), complex(e2)


# ---------------------------------------------------------------- table

@dataclass(frozen=True)
class ExpansionTable:
    m: int
    a: tuple
    Km: float
    Kmj_plus: tuple
    Kmj_minus: tuple
    c: tuple
    d: tuple
    e: tuple
    nu: complex
    notes: tuple = field(default=())

    def as_dict(self):
        return {
            "m": self.m, "a": list(self.a), "Km": self.Km,
            "Kmj_plus": list(self.Kmj_plus), "Kmj_minus": list(self.Kmj_minus),
            "c": list(self.c), "d": list(self.d), "e": list(self.e), "nu": self.nu,
        }


def build_table(p, cfg=DEFAULT):
    m = p.degree
    depth = ladder_depth(m)
    Km = K_m_closed(m)
    gp, gm = rotate_coeffs(p, 1), rotate_coeffs(p, -1)
    K_plus = [K_mj(gp, j, cfg) for j in range(1, depth + 1)]
    K_minus = [K_mj(gm, j, cfg) for j in range(1, depth + 1)]
    nu = compute_mu_nu(p)[1]
    c = compute_c(p, K_plus, K_minus)
    d = compute_d(p, c, nu, Km)
    e = compute_e(d, m)
    notes = ()
    if m % 2 == 0:
        notes = ("even m: the nu-term replaces the plain formula at slot j = m/2+1",)
    return ExpansionTable(m, p.coeffs, Km, tuple(K_plus), tuple(K_minus),
                          tuple(c), tuple(d), tuple(e), complex(nu), notes)


# ---------------------------------------------------------------- predictors

@dataclass(frozen=True)
class Prediction:
    n: int
    lambda0: float
    lambda_expansion: complex
    lambda_quantization: complex
    error_scale: float


def predict_expansion(table, n):
    m = table.m
    l0 = lambda0(m, n, table.Km)
    return complex(l0 + sum(e * l0 ** (1 - l / m) for l, e in enumerate(table.e, start=1)))


def _quant_fn(table, lam, target):
    ps = exponents(table.m)
    F = branch_pow(lam, ps[0]) - target
    dF = ps[0] * branch_pow(lam, ps[0] - 1)
    for j, dj in enumerate(table.d, start=1):
        F += dj * branch_pow(lam, ps[j])
        dF += dj * ps[j] * branch_pow(lam, ps[j] - 1)
    return F, dF


def predict_quantization(table, n, seed=None, max_iter=60):
    """Newton root of the truncated quantization function, seeded at the expansion."""
    m = table.m
    l0 = lambda0(m, n, table.Km)
    target = _rhs(m, n, table.Km)
    lam = complex(seed) if seed is not None else predict_expansion(table, n)
    if lam == 0:
        lam = complex(l0)
    tol = 1e-12 * l0 ** exponents(m)[0]
    F = None
    for _ in range(max_iter):
        F, dF = _quant_fn(table, lam, target)
        if abs(F) < tol:
            return lam
        step = F / dF
        # damp steps that would cross the branch cut
        while abs(step) > 0.5 * abs(lam):
            step *= 0.5
        lam -= step
    raise NoRootError(
        f"quantization Newton failed for n={n}", last=lam, residual=abs(F) if F is not None else math.inf
    )


def predict(table, n):
    l0 = lambda0(table.m, n, table.Km)
    return Prediction(
        n=n,
        lambda0=l0,
        lambda_expansion=predict_expansion(table, n),
        lambda_quantization=predict_quantization(table, n),
        error_scale=l0 ** (0.5 - 1 / table.m),
    )
