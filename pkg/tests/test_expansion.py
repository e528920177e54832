import math

import numpy as np
import pytest

from pt_spectra import Potential, PTSpectraError
from pt_spectra.expansion import (
    bender_constant_check,
    build_table,
    compute_c_m3,
    compute_d_m3,
    compute_e,
    e_closed_forms,
    exponents,
    lambda0,
    level_spacing,
    predict,
    predict_expansion,
    predict_quantization,
)
from pt_spectra.potential import rotate_coeffs
from pt_spectra.quadrature import K_m_closed, K_mj

REAL_CASES = [(3, (1, 1)), (4, (1, 0, 1)), (5, (0.5, -1, 0.25, 2)), (6, (1, -1, 0.5, 0.2, -0.3))]


@pytest.mark.parametrize("m", [3, 4, 100])
def test_bender_constant(m):
    assert bender_constant_check(m) == pytest.approx(1, abs=1e-12)


def test_exponents():
    assert exponents(3) == pytest.approx([5 / 6, 1 / 2, 1 / 6])
    assert exponents(4) == pytest.approx([3 / 4, 1 / 2, 1 / 4, 0])


def test_lambda0_value():
    assert lambda0(3, 10) == pytest.approx(42.24618032088023, rel=1e-13)
    with pytest.raises(ValueError):
        lambda0(3, -1)


@pytest.mark.parametrize("m", range(3, 11))
def test_lambda0_growth_law(m):
    l0 = np.array([lambda0(m, n) for n in range(101)])
    assert np.all(np.diff(l0) > 0)
    n = np.arange(100)
    np.testing.assert_allclose(l0[1:] / l0[:-1], (1 + 2 / (2 * n + 1)) ** (2 * m / (m + 2)), rtol=1e-13)


@pytest.mark.parametrize("m", [3, 4, 6])
def test_zero_potential_table(m):
    t = build_table(Potential.zero(m))
    assert all(c == 0 for c in t.c)
    assert all(d == 0 for d in t.d)
    assert all(e == 0 for e in t.e)
    for n in (0, 3, 17):
        assert predict_expansion(t, n) == lambda0(m, n)
        assert predict_quantization(t, n) == pytest.approx(lambda0(m, n), rel=1e-13)


@pytest.mark.parametrize("m, a", REAL_CASES)
def test_real_coefficients_give_real_d(m, a):
    t = build_table(Potential(m, a))
    for c in t.c:
        assert abs((1j * c).imag) < 1e-10
    for d in t.d:
        assert abs(d.imag) < 1e-10
    for n in (2, 9):
        assert abs(predict_expansion(t, n).imag) < 1e-10


def test_m3_branch_matches_generic_path():
    p = Potential(3, (1, 1))
    t = build_table(p)
    g4, g2 = rotate_coeffs(p, 4), rotate_coeffs(p, 2)
    c3 = compute_c_m3([K_mj(g4, j) for j in (1, 2)], [K_mj(g2, j) for j in (1, 2)])
    np.testing.assert_allclose(compute_d_m3(c3), t.d, atol=1e-13)
    assert t.d[1].real == pytest.approx(0.341677704344, abs=1e-10)


def test_frozen_table_m4():
    t = build_table(Potential(4, (1, 0, 0)))
    np.testing.assert_allclose(t.d, [0, -0.1285162259187554, 0.07942622669943554], atol=1e-12)
    np.testing.assert_allclose(t.e, [0, 0.17135496789167384, -0.10590163559924738], atol=1e-12)
    assert "nu-term" in t.notes[0]


@pytest.mark.parametrize("m", range(3, 11))
def test_e_closed_forms_random(m):
    rng = np.random.default_rng(m)
    J = m // 2 + 1
    for _ in range(20):
        d = rng.normal(size=J) + 1j * rng.normal(size=J)
        e = compute_e(list(d), m)
        e1, e2 = e_closed_forms(list(d), m)
        assert abs(e[0] - e1) < 1e-12
        assert abs(e[1] - e2) < 1e-12


def test_e_rejects_wrong_length():
    with pytest.raises(ValueError):
        compute_e([1, 2], 4)


def test_quantization_converges_to_expansion():
    t = build_table(Potential(4, (1, 0, 1)))
    gaps = []
    # the absolute gap tends to a constant, so the normalized gap decays like lambda0^(-1/4)
    for n in (640, 5000, 40_000, 300_000):
        pr = predict(t, n)
        gaps.append(abs(pr.lambda_expansion - pr.lambda_quantization) / pr.error_scale)
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


@pytest.mark.parametrize("m, a", [(3, (0, 0)), (4, (1, 0, 1)), (5, (0.5, -1, 0.25, 2))])
def test_index_gap_law(m, a):
    t = build_table(Potential(m, a))
    ratios = []
    for n in (50, 500, 5000):
        gap = (predict_expansion(t, n + 1) - predict_expansion(t, n)).real
        ratios.append(gap / level_spacing(m, lambda0(m, n)))
    assert abs(ratios[-1] - 1) < abs(ratios[0] - 1) or abs(ratios[0] - 1) < 1e-12
    assert abs(ratios[-1] - 1) < 1e-3


def test_cubic_family_prediction_against_shooting():
    # shooting value computed by enumerate_eigenvalues, residual 0.0109
    t = build_table(Potential(3, (0, 1)))
    pred = predict_expansion(t, 20)
    assert pred.real == pytest.approx(91.49057953262216, rel=1e-12)
    shoot = 91.51380842592296
    assert abs(shoot - pred) / lambda0(3, 20) ** (1 / 6) < 0.02


def test_bender_check_raises_when_tolerance_impossible():
    with pytest.raises(PTSpectraError):
        bender_constant_check(3, tol=-1)


@pytest.mark.parametrize("m, a", REAL_CASES)
def test_real_e_and_monotone_prediction(m, a):
    t = build_table(Potential(m, a))
    assert all(abs(e.imag) < 1e-10 for e in t.e)
    mags = [abs(predict_expansion(t, n)) for n in range(3, 200)]
    assert all(b > a for a, b in zip(mags, mags[1:]))
