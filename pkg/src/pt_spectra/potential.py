"""Problem instances, Stokes-sector geometry and branch conventions.

The eigenvalue problem is ``-u'' - [(iz)^m + P(iz)] u = lambda u`` with
``P(z) = a_1 z^(m-1) + ... + a_(m-1) z``.  After ``v(z) = u(-iz)`` it becomes
``-v'' + [z^m + P(z) + lambda] v = 0`` and the boundary conditions ask for
decay in the Stokes sectors S_{-1} and S_1.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidDegreeError, SingularInputError

__all__ = [
    "Potential",
    "SectorIndex",
    "omega",
    "branch_arg",
    "branch_pow",
    "branch_log",
    "rotate_coeffs",
    "is_pt_symmetric",
]


def _check_degree(m):
    if int(m) != m or m < 3:
        raise InvalidDegreeError(f"degree m must be an integer >= 3, got {m!r}")


@dataclass(frozen=True)
class Potential:
    """Degree ``m`` and the coefficient vector ``a = (a_1, ..., a_{m-1})``."""

    degree: int
    coeffs: tuple

    def __post_init__(self):
        _check_degree(self.degree)
        coeffs = tuple(complex(c) for c in self.coeffs)
        if len(coeffs) != self.degree - 1:
            raise ValueError(
                f"degree {self.degree} needs {self.degree - 1} coefficients, "
                f"got {len(coeffs)}"
            )
        object.__setattr__(self, "degree", int(self.degree))
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zero(cls, m):
        return cls(m, (0,) * (m - 1))

    @property
    def m(self):
        return self.degree

    @property
    def a(self):
        return np.array(self.coeffs, dtype=complex)

    def is_pt_symmetric(self):
        return is_pt_symmetric(self)

    def conj(self):
        return Potential(self.degree, tuple(c.conjugate() for c in self.coeffs))

    def rotate(self, k):
        return rotate_coeffs(self, k)

    def poly(self):
        """Coefficients of ``z^m + P(z)`` in descending powers (constant term 0)."""
        return np.concatenate(([1.0 + 0j], self.a, [0.0 + 0j]))

    def poly_with(self, lam):
        """Descending coefficients of ``z^m + P(z) + lambda``."""
        c = self.poly()
        c[-1] = complex(lam)
        return c

    def __str__(self):
        return f"m={self.degree}, a=({', '.join(_fmt(c) for c in self.coeffs)})"


def _fmt(c):
    if c.imag == 0:
        return f"{c.real:g}"
    return f"{c.real:g}{c.imag:+g}i"


@dataclass(frozen=True)
class SectorIndex:
    """Stokes sector S_k of the rotated equation; k is taken modulo m+2."""

    k: int
    m: int

    def __post_init__(self):
        _check_degree(self.m)

    @property
    def center(self):
        return 2 * self.k * math.pi / (self.m + 2)

    @property
    def half_opening(self):
        return math.pi / (self.m + 2)

    def contains(self, z):
        d = cmath.phase(complex(z)) - self.center
        d = (d + math.pi) % (2 * math.pi) - math.pi
        return abs(d) < self.half_opening


def omega(m):
    """``exp(2 pi i / (m + 2))``."""
    _check_degree(m)
    return cmath.exp(2j * math.pi / (m + 2))


def branch_arg(lam):
    """Argument in ``(-pi, pi]``; the negative real axis (including -0.0) maps to pi."""
    lam = complex(lam)
    if lam.imag == 0 and lam.real < 0:
        return math.pi
    return cmath.phase(lam)


def branch_log(lam):
    lam = complex(lam)
    if lam == 0:
        raise SingularInputError("log(0) is undefined")
    return complex(math.log(abs(lam)), branch_arg(lam))


def branch_pow(lam, s):
    """``lam**s`` with the cut on the negative real axis, arg in ``(-pi, pi]``."""
    lam = complex(lam)
    if lam == 0:
        if s > 0:
            return 0j
        raise SingularInputError("0 raised to a non-positive power")
    if float(s).is_integer():
        return lam ** int(s)
    return cmath.exp(s * branch_log(lam))


def rotate_coeffs(p, k):
    """G^k(a): entry j becomes ``omega^(-j k) a_j``."""
    m = p.degree
    n = m + 2
    k = int(k)
    return Potential(
        m,
        tuple(
            _root_of_unity(-(j + 1) * k, n) * c for j, c in enumerate(p.coeffs)
        ),
    )


def _root_of_unity(e, n):
    # exact at multiples of pi/2 so that G^(m+2) returns a unchanged
    e %= n
    if 4 * e % n == 0:
        return (1, 1j, -1, -1j)[4 * e // n]
    return cmath.exp(2j * math.pi * e / n)


def is_pt_symmetric(p):
    return all(c.imag == 0 for c in p.coeffs)
