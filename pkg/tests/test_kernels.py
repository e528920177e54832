import cmath
import os
import subprocess
import sys

import numpy as np
import pytest
from scipy.special import airy

from pt_spectra import kernels

needs_numba = pytest.mark.skipif(not kernels.NUMBA_ENABLED, reason="numba disabled")


def _airy_run(impl, z0, z1):
    ai0, aip0, _, _ = airy(z0)
    v, dv, ls, n = impl(np.array([0, 1], dtype=complex), z0, z1, ai0, aip0, 30, 1e-14, 100_000)
    assert n > 0
    return v * np.exp(ls), dv * np.exp(ls)


@pytest.mark.parametrize("z0, z1", [(0j, 3 + 2j), (1 - 1j, -2 + 0.5j), (0.5, 4j)])
def test_airy(z0, z1):
    ai1, aip1, _, _ = airy(z1)
    v, dv = _airy_run(kernels.taylor_segment_numpy, z0, z1)
    assert v == pytest.approx(ai1, rel=1e-12)
    assert dv == pytest.approx(aip1, rel=1e-12)


def test_cosh_with_rescaling():
    # v'' = v from v=1, v'=0 along the real axis: cosh grows past double range
    v, dv, ls, n = kernels.taylor_segment(np.array([1.0 + 0j]), 0, 800, 1, 0)
    assert n > 0
    assert ls + np.log(abs(v)) == pytest.approx(800 - np.log(2), rel=1e-14)
    assert dv / v == pytest.approx(1, abs=1e-14)


def test_step_budget_failure():
    v, dv, ls, n = kernels.taylor_segment(np.array([1.0 + 0j]), 0, 50, 1, 0, max_steps=2)
    assert n == -1


@needs_numba
@pytest.mark.parametrize("seed", range(4))
def test_numba_matches_numpy(seed):
    rng = np.random.default_rng(seed)
    q = rng.normal(size=5) + 1j * rng.normal(size=5)
    args = (q, 0.3 + 0.1j, 2.5 - 1.5j, 1 + 0.5j, -0.25 + 0j, 30, 1e-14, 100_000)
    a = kernels.taylor_segment_numpy(*args)
    b = kernels.taylor_segment_numba(*args)
    assert a[3] == b[3]
    assert a[0] * np.exp(a[2]) == pytest.approx(b[0] * np.exp(b[2]), rel=1e-12)
    assert a[1] * np.exp(a[2]) == pytest.approx(b[1] * np.exp(b[2]), rel=1e-12)


@needs_numba
def test_series_power_backends_agree():
    rng = np.random.default_rng(7)
    c = np.zeros(41, dtype=complex)
    c[1:] = (rng.normal(size=40) + 1j * rng.normal(size=40)) * 0.3 ** np.arange(1, 41)
    np.testing.assert_allclose(kernels.series_power_numba(c, 0.5), kernels.series_power_numpy(c, 0.5),
                               rtol=1e-13, atol=1e-15)


def test_series_power_sqrt():
    c = np.zeros(6, dtype=complex)
    c[1] = 1
    np.testing.assert_allclose(kernels.series_power(c, 0.5), [1, 0.5, -1 / 8, 1 / 16, -5 / 128, 7 / 256])


def test_disable_flag():
    env = dict(os.environ, PT_SPECTRA_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "import pt_spectra.kernels as k; print(k.NUMBA_ENABLED)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "False"
