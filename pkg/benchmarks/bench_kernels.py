"""Numba kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Kernel timings compare both implementations in one process.  The
end-to-end root solve runs once per backend in a subprocess, since the
backend is fixed at import time by PT_SPECTRA_DISABLE_NUMBA.
"""
import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from pt_spectra import kernels
from pt_spectra.potential import Potential

_SOLVE = """
import json, time
from pt_spectra import Potential, find_eigenvalue, NUMBA_ENABLED
p = Potential(3, (0, 0))
find_eigenvalue(p, 1.2)  # warm-up (jit compile or cache load)
t = time.perf_counter()
lam, _ = find_eigenvalue(p, 42.0)
print(json.dumps({"numba": NUMBA_ENABLED, "seconds": time.perf_counter() - t, "lambda": lam.real}))
"""


def best(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def bench_kernels(repeat):
    q = Potential(3, (0, 0)).poly_with(42.0)[::-1].astype(complex)
    w = np.exp(2j * np.pi / 5)
    args = (q, 14.0 * w, 3.5 * w, 1.0 + 0j, -10.0 + 0j, 30, 1e-14, 2_000_000)
    c = np.zeros(61, dtype=complex)
    c[1:4] = [0.3, -0.2 + 0.1j, 0.05]
    rows = []
    if kernels.NUMBA_ENABLED:
        kernels.taylor_segment_numba(*args)
        kernels.series_power_numba(c, 0.5)
    for name, np_fn, nb_fn, number in [
        ("taylor_segment", lambda: kernels.taylor_segment_numpy(*args),
         lambda: kernels.taylor_segment_numba(*args), 3),
        ("series_power(60)", lambda: kernels.series_power_numpy(c, 0.5),
         lambda: kernels.series_power_numba(c, 0.5), 200),
    ]:
        t_np = best(np_fn, repeat, number)
        t_nb = best(nb_fn, repeat, number) if kernels.NUMBA_ENABLED else float("nan")
        rows.append((name, t_np, t_nb))
    return rows


def bench_solve():
    out = {}
    for flag in ("0", "1"):
        env = dict(os.environ, PT_SPECTRA_DISABLE_NUMBA=flag)
        res = subprocess.run([sys.executable, "-c", _SOLVE], env=env, capture_output=True,
                             text=True, check=True)
        out[flag] = json.loads(res.stdout.strip().splitlines()[-1])
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-solve", action="store_true")
    args = ap.parse_args()

    print(f"{'kernel':<20}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>10}")
    for name, t_np, t_nb in bench_kernels(args.repeat):
        print(f"{name:<20}{t_np:>12.3e}{t_nb:>12.3e}{t_np / t_nb:>10.1f}")
    if args.skip_solve:
        return
    res = bench_solve()
    nb, fb = res["0"], res["1"]
    print(f"\nfind_eigenvalue m=3 a=0 near 42:  numba {nb['seconds']:.3f} s, "
          f"fallback {fb['seconds']:.3f} s, speedup {fb['seconds'] / nb['seconds']:.1f}")
    print(f"roots agree to {abs(nb['lambda'] - fb['lambda']):.1e}")


if __name__ == "__main__":
    main()
