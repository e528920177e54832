"""Improper integrals: K_m, the constants K_{m,j}(a), and L(a, lambda).

All integrands decay only algebraically, so every integral is split into an
adaptive part on ``[0, T]`` and a tail on ``[T, inf)`` that is summed from the
integrand's convergent large-t expansion.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.special import binom, digamma, gamma

from .errors import DomainError, InvalidDegreeError, QuadratureError
from .potential import Potential, branch_arg, branch_log, branch_pow
from .series import CoefficientLadder, compute_b, compute_bjk, ladder_depth, sqrt_coeffs

__all__ = [
    "QuadratureConfig",
    "K_m_closed",
    "K_m_quad",
    "g_j",
    "K_mj",
    "K_mj_closed",
    "K_table",
    "L_numeric",
    "L_expansion",
]


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-13
    rel_tol: float = 1e-12
    tail_cut: float = 2.0
    max_subdivisions: int = 400
    # |arg lambda| <= pi - arg_margin is required by L_numeric
    arg_margin: float = 0.05

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("quadrature tolerances must be positive")
        if self.tail_cut < 1:
            raise ValueError("tail_cut must be >= 1")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be positive")


DEFAULT = QuadratureConfig()


def _check_m(m):
    if int(m) != m or m < 3:
        raise InvalidDegreeError(f"degree m must be an integer >= 3, got {m!r}")


def _quad(f, a, b, cfg, complex_func=False, points=None):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(
            f, a, b,
            epsabs=cfg.abs_tol, epsrel=cfg.rel_tol, limit=cfg.max_subdivisions,
            complex_func=complex_func, points=points, full_output=1,
        )
    if complex_func:
        value = out[0]
        err = abs(out[1])
        info = out[2]
        ier = max(info["real"][1] if len(info["real"]) > 1 else 0,
                  info["imag"][1] if len(info["imag"]) > 1 else 0)
    else:
        value, err = out[0], out[1]
        ier = 0 if len(out) == 3 else 1
    if ier and err > max(cfg.abs_tol, cfg.rel_tol * abs(value)) * 100:
        raise QuadratureError(
            f"quadrature on [{a}, {b}] did not converge (error estimate {err:.3g})",
            error_estimate=err,
        )
    return value, err


def _sum_tail(terms, cfg, max_terms=400):
    """Sum a convergent tail series given as a term generator."""
    total = 0.0
    for n, term in enumerate(terms):
        total += term
        if abs(term) < cfg.abs_tol * 1e-3 and n > 2:
            return total
        if n >= max_terms:
            break
    raise QuadratureError("tail series did not converge; raise tail_cut")


# ---------------------------------------------------------------- K_m

def K_m_closed(m):
    """sqrt(pi) Gamma(1+1/m) / (2 cos(pi/m) Gamma(3/2+1/m))."""
    _check_m(m)
    return math.sqrt(math.pi) * gamma(1 + 1 / m) / (
        2 * math.cos(math.pi / m) * gamma(1.5 + 1 / m)
    )


@lru_cache(maxsize=64)
def K_m_quad(m, cfg=DEFAULT):
    """K_m = int_0^inf (sqrt(1+t^m) - t^(m/2)) dt by quadrature plus series tail."""
    _check_m(m)
    T = cfg.tail_cut

    def f(t):
        return 1.0 / (math.sqrt(1.0 + t**m) + t ** (m / 2))

    head, _ = _quad(f, 0.0, 1.0, cfg)
    mid, _ = _quad(f, 1.0, T, cfg)
    # t^(m/2) (sqrt(1 + t^-m) - 1) = sum_k binom(1/2, k) t^(m/2 - m k)
    tail = _sum_tail(
        (binom(0.5, k) * T ** (m / 2 - m * k + 1) / (m * k - m / 2 - 1)
         for k in range(1, 10_000)),
        cfg,
    )
    return head + mid + tail


# ---------------------------------------------------------------- K_{m,j}

def g_j(tau, p, ladder, j):
    """g_j(tau) = sum_k b_{j,k} tau^(mk-j) / (tau^m + 1)^(k - 1/2)."""
    m = p.degree
    bjk = ladder.bjk[j - 1]
    tau = float(tau)
    return sum(
        b * tau ** (m * k - j) / (tau**m + 1) ** (k - 0.5)
        for k, b in enumerate(bjk, start=1)
    )


def _log_slot(m, j):
    return m % 2 == 0 and j == m // 2 + 1


@lru_cache(maxsize=512)
def _kappa_quad(m, j, k, cfg):
    """Real integral multiplying b_{j,k} in K_{m,j}.

    Regular slot:  t^(m/2-j) [ (t^m/(1+t^m))^(k-1/2) - 1 ]
    Log slot:      t^-1 (t^m/(1+t^m))^(k-1/2) - 1/(1+t)
    """
    beta = k - 0.5
    alpha = m / 2 - j
    log_slot = _log_slot(m, j)
    T = cfg.tail_cut

    def ratio_pow_m1(t):
        # (t^m/(1+t^m))^beta - 1, stable for large t
        return math.expm1(-beta * math.log1p(t ** (-m)))

    if log_slot:
        def f(t):
            if t == 0.0:
                return -1.0 if m * beta - 1 > 0 else 0.0
            return (t ** (m * beta - 1)) / (1 + t**m) ** beta - 1 / (1 + t)
    else:
        def f(t):
            if t == 0.0:
                return 0.0
            return t**alpha * ratio_pow_m1(t)

    # t = s^2 removes the t^(-1/2) endpoint singularity of odd-m top slot
    head, _ = _quad(lambda s: 2 * s * f(s * s), 0.0, 1.0, cfg)
    mid, _ = _quad(f, 1.0, T, cfg)
    # (1 + t^-m)^(-beta) - 1 = sum_l binom(-beta, l) t^(-m l)
    if log_slot:
        tail = math.log1p(1 / T) + _sum_tail(
            (binom(-beta, l) * T ** (-m * l) / (m * l) for l in range(1, 10_000)),
            cfg,
        )
    else:
        tail = _sum_tail(
            (binom(-beta, l) * T ** (alpha - m * l + 1) / (m * l - alpha - 1)
             for l in range(1, 10_000)),
            cfg,
        )
    return head + mid + tail


def _kappa_closed(m, j, k):
    # analytic continuation of the Mellin transform; digamma form at the log slot
    if _log_slot(m, j):
        return (digamma(1.0) - digamma(k - 0.5)) / m
    return gamma(k + (1 - j) / m) * gamma((j - 1) / m - 0.5) / (m * gamma(k - 0.5))


def K_mj(p, j, cfg=DEFAULT):
    """K_{m,j}(a) for 1 <= j <= floor(m/2)+1; j = 0 gives K_m."""
    m = p.degree
    if j == 0:
        return complex(K_m_quad(m, cfg))
    depth = ladder_depth(m)
    if not 1 <= j <= depth:
        raise ValueError(f"K_(m,j) defined for 0 <= j <= {depth}, got {j}")
    bjk = compute_bjk(p, j)
    return complex(sum(b * _kappa_quad(m, j, k, cfg) for k, b in enumerate(bjk, 1)))


def K_mj_closed(p, j):
    """Gamma-function evaluation of K_{m,j}(a); independent of the quadrature."""
    m = p.degree
    if j == 0:
        return complex(K_m_closed(m))
    bjk = compute_bjk(p, j)
    return complex(sum(b * _kappa_closed(m, j, k) for k, b in enumerate(bjk, 1)))


def K_table(p, cfg=DEFAULT):
    """[K_{m,0}, K_{m,1}(a), ..., K_{m,depth}(a)]."""
    return [K_mj(p, j, cfg) for j in range(ladder_depth(p.degree) + 1)]


# ---------------------------------------------------------------- L(a, lambda)

def _check_no_cut_crossing(poly_desc, T):
    """Raise if Q(t) touches the closed negative real axis for t in [0, T]."""
    im = np.poly1d(np.imag(poly_desc))
    re = np.poly1d(np.real(poly_desc))
    if np.all(np.imag(poly_desc) == 0):
        candidates = np.array([0.0, T] + [r.real for r in re.roots if abs(r.imag) < 1e-12])
        grid = np.linspace(0.0, T, 2001)
        if np.any(re(grid) <= 0) or np.any(re(candidates[(candidates >= 0) & (candidates <= T)]) <= 0):
            raise DomainError(
                "t^m + P(t) + lambda is not positive on the integration axis; "
                "increase |lambda|"
            )
        return
    roots = im.roots if im.order > 0 else np.array([])
    for r in np.atleast_1d(roots):
        if abs(r.imag) < 1e-9 and 0 <= r.real <= T and re(r.real) <= 0:
            raise DomainError(
                "t^m + P(t) + lambda crosses the branch cut of the square root "
                f"near t={r.real:.4g}; increase |lambda|"
            )


def L_numeric(p, lam, cfg=DEFAULT, ladder=None):
    """Direct quadrature of L(a, lambda) along the positive real t-axis."""
    m = p.degree
    lam = complex(lam)
    if abs(branch_arg(lam)) > math.pi - cfg.arg_margin:
        raise DomainError(
            f"arg(lambda) must satisfy |arg| <= pi - {cfg.arg_margin}"
        )
    poly = p.poly_with(lam)
    rho = float(np.max(np.abs(np.roots(poly))))
    T = max(cfg.tail_cut, 3.0 * rho)
    _check_no_cut_crossing(poly, T)
    n_sub = (m + 1) // 2 if m % 2 else m // 2
    bs = [c for c, _ in compute_b(p, min(m, n_sub + 1))]
    b_log = bs[m // 2] if m % 2 == 0 else 0.0
    Qpoly = np.poly1d(poly)

    def f(t):
        if t == 0.0:
            # finite part; the odd-m t^(-1/2) term is handled by the substitution
            return np.sqrt(complex(lam)) - b_log
        s = np.sqrt(Qpoly(t)) - t ** (m / 2)
        for j in range(1, n_sub + 1):
            s -= bs[j - 1] * t ** (m / 2 - j)
        if m % 2 == 0:
            s -= b_log / (t + 1)
        return s

    s_cut = min(1.0, T)
    head, _ = _quad(lambda s: 2 * s * f(s * s), 0.0, math.sqrt(s_cut), cfg, complex_func=True)
    mid, _ = _quad(f, s_cut, T, cfg, complex_func=True, points=_breaks(rho, s_cut, T))
    order = 40
    while True:
        b = sqrt_coeffs(p, lam, order)
        first = (m + 3) // 2 if m % 2 else m // 2 + 2
        js = np.arange(first, order + 1)
        terms = b[first:] * T ** (m / 2 - js + 1) / (js - m / 2 - 1)
        if abs(terms[-1]) < cfg.abs_tol * 1e-2 or order > 640:
            break
        order *= 2
    tail = terms.sum()
    if m % 2 == 0:
        tail += b_log * math.log1p(1 / T)
    return complex(head + mid + tail)


def _breaks(rho, lo, hi):
    pts = [x for x in (0.5 * rho, rho, 2 * rho) if lo < x < hi]
    return pts or None


def L_expansion(p, lam, K=None, cfg=DEFAULT):
    """Truncated large-lambda expansion of L(a, lambda), including the even-m log term."""
    m = p.degree
    if K is None:
        K = K_table(p, cfg)
    lam = complex(lam)
    out = sum(Kj * branch_pow(lam, 0.5 + (1 - j) / m) for j, Kj in enumerate(K))
    if m % 2 == 0:
        b = compute_b(p, m // 2 + 1)[-1][0]
        out -= b / m * branch_log(lam)
    return complex(out)
