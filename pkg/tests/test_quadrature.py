import cmath
import math

import numpy as np
import pytest
from scipy.special import gamma

from pt_spectra import DomainError, InvalidDegreeError, Potential, QuadratureConfig
from pt_spectra.potential import branch_pow, omega, rotate_coeffs
from pt_spectra.quadrature import (
    K_m_closed,
    K_m_quad,
    K_mj,
    K_mj_closed,
    L_expansion,
    L_numeric,
    g_j,
)
from pt_spectra.series import CoefficientLadder, compute_b

# tests/oracles/trapezoid_kmj.py
TRAPEZOID_KMJ = [
    (4, (1, 0, 0), 2, 0.158852453399 + 0j),
    (4, (1, 0, 0), 3, -0.020005817274 + 0j),
    (3, (1, 1), 2, -0.574913235384 + 0j),
    (4, (1, 1j, 0.5), 3, 0.066637580296 + 0.038356602430j),
    (5, (0.5, -1, 0.25, 2), 3, -0.511773178279 + 0j),
]


def test_closed_form_m3_m4():
    assert K_m_closed(3) == pytest.approx(math.sqrt(math.pi) * gamma(4 / 3) / gamma(11 / 6), rel=1e-15)
    assert K_m_closed(4) == pytest.approx(math.sqrt(math.pi / 2) * gamma(5 / 4) / gamma(7 / 4), rel=1e-15)


@pytest.mark.parametrize("m", range(3, 11))
def test_K_m_quad_matches_closed(m):
    assert abs(K_m_quad(m) - K_m_closed(m)) < 1e-10
    assert K_m_quad(m) > 0


@pytest.mark.parametrize("m", [2, 1])
def test_K_m_invalid(m):
    with pytest.raises(InvalidDegreeError):
        K_m_closed(m)


def test_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(abs_tol=0)
    with pytest.raises(ValueError):
        QuadratureConfig(tail_cut=0.5)


def test_g_j_examples():
    p = Potential(4, (1, 1, 1))
    lad = CoefficientLadder.build(p)
    # b_21 = 1/2 carries (tau^m+1)^(1/2), b_22 = -1/8 carries (tau^m+1)^(3/2)
    assert g_j(1.0, p, lad, 2) == pytest.approx(0.5 / 2**0.5 - 0.125 / 2**1.5)
    assert g_j(0.0, p, lad, 1) == 0
    tau = 3.0
    assert g_j(tau, p, lad, 1) == pytest.approx(0.5 * tau**3 / math.sqrt(tau**4 + 1))
    zero = Potential.zero(4)
    assert g_j(2.0, zero, CoefficientLadder.build(zero), 3) == 0


def test_g_j_large_tau():
    p = Potential(5, (0.5, -1, 0.25, 2))
    lad = CoefficientLadder.build(p)
    b3 = compute_b(p, 3)[2][0]
    for tau in (20.0, 40.0):
        diff = abs(g_j(tau, p, lad, 3) - b3 * tau ** (2.5 - 3))
        assert diff < 10 * tau ** (-2.5 - 3)


@pytest.mark.parametrize("m, a, j, expected", TRAPEZOID_KMJ)
def test_K_mj_against_trapezoid_oracle(m, a, j, expected):
    p = Potential(m, a)
    assert K_mj(p, j) == pytest.approx(expected, abs=1e-10)
    assert K_mj_closed(p, j) == pytest.approx(expected, abs=1e-10)


@pytest.mark.parametrize("m", [3, 4, 6])
def test_K_mj_zero_potential(m):
    for j in range(1, m // 2 + 2):
        assert K_mj(Potential.zero(m), j) == 0


@pytest.mark.parametrize("c", [2.0, -0.5, 1 + 2j])
def test_K_m1_linear(c):
    a = (0.7, 0.3, -1.1)
    base = K_mj(Potential(4, a), 1)
    scaled = K_mj(Potential(4, tuple(c * x for x in a)), 1)
    assert scaled == pytest.approx(c * base, abs=1e-13)


@pytest.mark.parametrize("m, a", [(3, (1, 0.5)), (4, (1, -2, 0.3)), (5, (0.2, 1, -1, 0.5))])
def test_conjugation_identity(m, a):
    p = Potential(m, a)
    pbar = p.conj()
    for j in range(1, m // 2 + 2):
        lhs = K_mj(rotate_coeffs(pbar, -1), j).conjugate()
        assert lhs == pytest.approx(K_mj(rotate_coeffs(p, 1), j), abs=1e-12)


@pytest.mark.parametrize("m, lam", [(3, 7.0), (4, 50.0), (5, 2.5)])
def test_L_scaling_identity(m, lam):
    assert L_numeric(Potential.zero(m), lam) == pytest.approx(K_m_closed(m) * lam ** (0.5 + 1 / m), rel=1e-11)


def test_L_leading_behaviour_along_ray():
    p = Potential(3, (1, 1))
    lam = 1e4 * cmath.exp(1j * math.pi / 3)
    ratio = L_numeric(p, lam).real / (K_m_closed(3) * math.cos(5 / 6 * math.pi / 3) * abs(lam) ** (5 / 6))
    assert abs(ratio - 1) < 0.02


def test_L_expansion_small_residual_even_m():
    p = Potential(4, (1, 0, 0))
    lam = 1e4
    resid = abs(L_numeric(p, lam) - L_expansion(p, lam))
    assert resid < lam ** (-0.25)


def test_L_domain_errors():
    p = Potential(3, (0, 0))
    with pytest.raises(DomainError):
        L_numeric(p, -1.0)
    with pytest.raises(DomainError):
        L_numeric(Potential(4, (0, -10, 0)), 1.0)


def test_c_from_L_differences():
    # the lambda^(1/6) coefficient of L(G a, w^2 lam) - L(G^-1 a, w^-2 lam) is c_{3,2}
    p = Potential(3, (1, 1))
    w2 = omega(3) ** 2
    lam = 1e6
    diff = L_numeric(rotate_coeffs(p, 1), w2 * lam) - L_numeric(rotate_coeffs(p, -1), lam / w2)
    K = [K_m_closed(3), K_mj(rotate_coeffs(p, 1), 1), K_mj(rotate_coeffs(p, 1), 2)]
    Km = [K_m_closed(3), K_mj(rotate_coeffs(p, -1), 1), K_mj(rotate_coeffs(p, -1), 2)]
    ps = [5 / 6, 1 / 2, 1 / 6]
    c = [K[j] * branch_pow(w2, ps[j]) - Km[j] * branch_pow(1 / w2, ps[j]) for j in range(3)]
    est = (diff - c[0] * lam ** ps[0] - c[1] * lam ** ps[1]) / lam ** ps[2]
    assert est == pytest.approx(c[2], rel=0.02)
