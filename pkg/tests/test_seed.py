import cmath
import math

import numpy as np
import pytest

from pt_spectra import Potential, SeedAccuracyError, SingularInputError
from pt_spectra.kernels import taylor_segment
from pt_spectra.potential import omega
from pt_spectra.shooting.seed import F_phase, boundary_seed, frame, seed_from_frame, wkb_series


def test_F_phase_zero_potential():
    z = 3 + 1j
    assert F_phase(z, Potential.zero(5)) == pytest.approx(2 / 7 * z**3.5)


def test_F_phase_cubic():
    a1, a2 = 0.7, -1.3 + 0.2j
    z = 4.0 - 2j
    b2 = a2 / 2 - a1**2 / 8
    expected = 0.4 * z**2.5 + (2 / 3) * (a1 / 2) * z**1.5 + 2 * b2 * z**0.5
    assert F_phase(z, Potential(3, (a1, a2))) == pytest.approx(expected, rel=1e-14)


def test_F_phase_rejects_origin():
    with pytest.raises(SingularInputError):
        F_phase(0, Potential.zero(3))


def test_plain_seed_formula():
    R = 20.0
    log_f, ratio, _ = seed_from_frame(Potential.zero(3), 0.0, R, wkb_order=0)
    assert log_f == pytest.approx(-0.75 * math.log(R) - 0.4 * R**2.5, rel=1e-15)
    assert ratio == pytest.approx(-(R**1.5))
    s = boundary_seed(Potential.zero(3), 0.0, 0, 4.0, wkb_order=0)
    assert s.value() == pytest.approx(4.0**-0.75 * math.exp(-0.4 * 4.0**2.5))
    assert s.derivative() / s.value() == pytest.approx(-8.0)


def test_higher_order_seed_close_to_plain():
    R = 20.0
    plain = seed_from_frame(Potential.zero(3), 0.0, R, wkb_order=0)
    full = seed_from_frame(Potential.zero(3), 0.0, R, wkb_order=8)
    assert abs(full[0] - plain[0]) < 1e-2
    assert full[1] / plain[1] == pytest.approx(1, abs=0.05)


@pytest.mark.parametrize(
    "a, lam", [((0, 0), 3.0), ((1, 0.5), 10 + 2j), ((1, 0, 1), 5.0), ((0.3, -1, 0.2, 1j), 2.0)]
)
def test_seed_consistent_with_inward_integration(a, lam):
    """log f at R2 from the seed equals the seed at R1 carried inward by the ODE."""
    p = Potential(len(a) + 1, a)
    R1, R2 = 16.0, 11.0
    l1, r1, e1 = seed_from_frame(p, lam, R1)
    l2, r2, e2 = seed_from_frame(p, lam, R2)
    assert max(e1, e2) < 1e-12
    q = p.poly_with(lam)[::-1]
    v, dv, ls, n = taylor_segment(q, R1, R2, 1.0, r1)
    log_f2 = l1 + ls + cmath.log(v)
    tol = 1e-12 + 1e-13 * abs(l2)
    assert (log_f2 - l2).real == pytest.approx(0, abs=tol)
    assert cmath.exp(1j * (log_f2 - l2).imag) == pytest.approx(1, abs=1e-11)
    assert dv / v == pytest.approx(r2, rel=1e-11)


@pytest.mark.parametrize("k", [-1, 1, 2])
def test_boundary_seed_rotation(k):
    p = Potential(4, (1, 0.5, -1))
    lam = 3 + 1j
    R = 15.0
    s = boundary_seed(p, lam, k, R)
    pk, lamk = frame(p, lam, k)
    log_f, ratio, _ = seed_from_frame(pk, lamk, R)
    assert s.z0 == pytest.approx(R * omega(4) ** k)
    assert s.log_f == log_f
    assert s.ratio == pytest.approx(ratio * omega(4) ** (-k))


def test_seed_inside_turning_disk():
    with pytest.raises(SeedAccuracyError):
        seed_from_frame(Potential.zero(3), 1000.0, 5.0)


def test_seed_tolerance_enforced():
    with pytest.raises(SeedAccuracyError):
        boundary_seed(Potential.zero(3), 50.0, 1, 8.0, tol=1e-15)


def test_wkb_series_leading_terms():
    S, alphas = wkb_series(Potential.zero(3), 0.0, 3, 10)
    assert alphas[:3] == [1.5, -1.0, -3.5]
    assert S[0][0] == -1
    assert S[1][0] == pytest.approx(-0.75)
