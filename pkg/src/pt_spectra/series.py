"""Truncated power series and the square-root expansion coefficients.

Expanding

    (1 + a_1 x + ... + a_{m-1} x^{m-1} + lambda x^m)^{1/2} = 1 + sum_j b_j x^j,   x = 1/z,

gives the ladder b_j(a, lambda).  For ``j <= m - 1`` the b_j do not involve
lambda and for ``j = m`` lambda enters only through ``lambda / 2``, so the
coefficients are stored as (constant, lambda-coefficient) pairs.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import binom

from .errors import UnsupportedOrderError
from .kernels import series_power
from .potential import Potential

__all__ = [
    "TruncatedSeries",
    "binom_power",
    "CoefficientLadder",
    "compute_b",
    "compute_bjk",
    "compute_mu_nu",
    "sqrt_coeffs",
    "ladder_depth",
]


class TruncatedSeries:
    """``sum_{n=0}^{N} c_n x^n`` with all arithmetic exact to order N.

    Higher orders are discarded, never assumed zero-valued on purpose, so
    mixing two series of different order is an error rather than a silent
    truncation.
    """

    __slots__ = ("coeffs",)
    # make numpy scalars defer to our reflected operators
    __array_ufunc__ = None

    def __init__(self, coeffs, order=None):
        c = np.asarray(coeffs, dtype=complex).ravel()
        if order is not None:
            out = np.zeros(order + 1, dtype=complex)
            n = min(order + 1, c.size)
            out[:n] = c[:n]
            c = out
        if c.size == 0:
            raise ValueError("a truncated series needs at least one coefficient")
        self.coeffs = c

    @classmethod
    def variable(cls, order):
        return cls([0, 1], order)

    @classmethod
    def constant(cls, value, order):
        return cls([value], order)

    @property
    def order(self):
        return self.coeffs.size - 1

    def __len__(self):
        return self.coeffs.size

    def __getitem__(self, n):
        return self.coeffs[n]

    def __repr__(self):
        return f"TruncatedSeries({self.coeffs!r})"

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            if other.order != self.order:
                raise ValueError(
                    f"order mismatch: {self.order} vs {other.order}"
                )
            return other
        return TruncatedSeries.constant(other, self.order)

    def __add__(self, other):
        other = self._coerce(other)
        return TruncatedSeries(self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries(self.coeffs * complex(other))
        other = self._coerce(other)
        n = self.order + 1
        return TruncatedSeries(np.convolve(self.coeffs, other.coeffs)[:n])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries(self.coeffs / complex(other))
        return self * other._coerce(other).reciprocal()

    def __pow__(self, k):
        if int(k) != k or k < 0:
            raise ValueError("use power() for non-integer exponents")
        out = TruncatedSeries.constant(1, self.order)
        for _ in range(int(k)):
            out = out * self
        return out

    def reciprocal(self):
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("series with zero constant term has no reciprocal")
        return binom_power(self._unit_tail(c0), -1.0) / c0

    def power(self, alpha, c0_power=None):
        """``self**alpha``; ``c0_power`` fixes the branch of ``c0**alpha``."""
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("non-integer power of a series vanishing at 0")
        if c0_power is None:
            c0_power = np.exp(alpha * np.log(c0))
        return binom_power(self._unit_tail(c0), alpha) * c0_power

    def _unit_tail(self, c0):
        s = self.coeffs / c0
        s[0] = 0
        return TruncatedSeries(s)

    def deriv(self):
        """Derivative; the result has order one less."""
        n = np.arange(1, self.coeffs.size)
        if n.size == 0:
            return TruncatedSeries([0])
        return TruncatedSeries(self.coeffs[1:] * n)

    def truncate(self, order):
        return TruncatedSeries(self.coeffs, order)

    def __call__(self, x):
        return np.polynomial.polynomial.polyval(x, self.coeffs)


def binom_power(s, alpha):
    """``(1 + s)^alpha`` for a series ``s`` with zero constant term.

    Uses the J.C.P. Miller recurrence, O(N^2) in the order.
    """
    c = s.coeffs
    if c[0] != 0:
        raise ValueError("binom_power requires a zero constant term")
    return TruncatedSeries(series_power(c, alpha))


def ladder_depth(m):
    """Number of expansion slots, floor(m/2) + 1."""
    return m // 2 + 1


def _u_series(p, order, lam=0.0):
    u = np.zeros(order + 1, dtype=complex)
    for j, a in enumerate(p.coeffs, start=1):
        if j <= order:
            u[j] = a
    if p.degree <= order:
        u[p.degree] += lam
    return TruncatedSeries(u)


@lru_cache(maxsize=256)
def _binomial_terms(p, order):
    """Coefficient arrays of binom(1/2, k) u^k for k = 1..order (lambda = 0)."""
    u = _u_series(p, order)
    terms = []
    uk = TruncatedSeries.constant(1, order)
    for k in range(1, order + 1):
        uk = uk * u
        terms.append(binom(0.5, k) * uk.coeffs)
    return np.array(terms)


def compute_b(p, J):
    """``b_1..b_J`` as (constant, lambda-coefficient) pairs, J <= m."""
    m = p.degree
    if not 1 <= J <= m:
        raise UnsupportedOrderError(f"b_j available for 1 <= j <= m={m}, got J={J}")
    total = _binomial_terms(p, J).sum(axis=0)
    return [(complex(total[j]), 0.5 if j == m else 0.0) for j in range(1, J + 1)]


def compute_bjk(p, j):
    """``b_{j,1}..b_{j,j}``: the part of b_j coming from the k-th binomial power."""
    if not 1 <= j <= ladder_depth(p.degree):
        raise UnsupportedOrderError(
            f"b_(j,k) needed only for 1 <= j <= {ladder_depth(p.degree)}, got {j}"
        )
    terms = _binomial_terms(p, j)
    return [complex(terms[k - 1, j]) for k in range(1, j + 1)]


def compute_mu_nu(p):
    """Return ``(mu, nu, r_m)`` for the potential."""
    m = p.degree
    if m % 2:
        return m / 4 + 0j, 0j, -m / 4 + 0j
    b = compute_b(p, m // 2 + 1)[-1][0]
    return m / 4 - b, b, -m / 4 - b


def sqrt_coeffs(p, lam, order):
    """Numeric ``b_0..b_order`` of the square root with a fixed lambda (b_0 = 1)."""
    return binom_power(_u_series(p, order, lam), 0.5).coeffs


@dataclass(frozen=True)
class CoefficientLadder:
    m: int
    a: tuple
    b: tuple
    bjk: tuple
    r_m: complex
    mu: complex
    nu: complex

    @classmethod
    def build(cls, p):
        m = p.degree
        depth = ladder_depth(m)
        mu, nu, r_m = compute_mu_nu(p)
        return cls(
            m=m,
            a=p.coeffs,
            b=tuple(compute_b(p, m)),
            bjk=tuple(tuple(compute_bjk(p, j)) for j in range(1, depth + 1)),
            r_m=r_m,
            mu=mu,
            nu=nu,
        )

    def b_value(self, j, lam=0.0):
        """b_j(a, lambda) for 1 <= j <= m."""
        const, slope = self.b[j - 1]
        return const + slope * lam
