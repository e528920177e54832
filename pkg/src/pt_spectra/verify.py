"""Self-checks behind ``pt-spectra verify``.

Each suite returns a :class:`CheckResult` holding the measured quantities,
the threshold used and a pass flag.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .expansion import bender_constant_check
from .quadrature import DEFAULT, L_expansion, L_numeric, K_table
from .series import compute_mu_nu, ladder_depth
from .shooting import ShootingConfig, enumerate_eigenvalues, wronskian

__all__ = [
    "CheckResult",
    "SUITES",
    "run_suite",
    "check_wronskian",
    "check_reality",
    "check_monotonic",
    "check_residual",
    "check_bender",
    "check_L_expansion",
    "residual_trend",
    "expansion_error_exponent",
]


@dataclass
class CheckResult:
    suite: str
    passed: bool
    threshold: float
    measured: dict = field(default_factory=dict)

    def __post_init__(self):
        self.passed = bool(self.passed)

    def lines(self):
        out = [f"{self.suite}: {'PASS' if self.passed else 'FAIL'} (threshold {self.threshold:g})"]
        for k, v in self.measured.items():
            out.append(f"  {k} = {v}")
        return out


def check_wronskian(p, lams=(1.0, 10.0, 100.0), tol=1e-6, cfg=None):
    """W_{0,1} / (2 omega^mu) should equal 1."""
    m = p.degree
    mu = compute_mu_nu(p)[0]
    ref = 2 * cmath.exp(2j * math.pi * mu / (m + 2))
    worst = 0.0
    measured = {}
    for lam in lams:
        r = wronskian(p, lam, 0, 1, cfg) / ref
        dev = max(abs(abs(r) - 1), abs(cmath.phase(r)))
        measured[f"lambda={lam:g}"] = f"|r|-1={abs(r) - 1:.3e} arg r={cmath.phase(r):.3e}"
        worst = max(worst, dev)
    measured["max_deviation"] = f"{worst:.3e}"
    return CheckResult("wronskian", worst < tol, tol, measured)


def _records(p, n_max, cfg, records=None):
    return records if records is not None else enumerate_eigenvalues(p, n_max, cfg)


def check_reality(p, n_max=15, cfg=None, records=None):
    cfg = cfg or ShootingConfig()
    recs = _records(p, n_max, cfg, records)
    bad = [r.n for r in recs if r.classification != "real-positive"]
    measured = {"roots": len(recs), "non_real_or_unresolved": len(bad), "indices": bad}
    return CheckResult("reality", not bad, cfg.reality_tol, measured)


def check_monotonic(p, n_max=15, cfg=None, records=None):
    cfg = cfg or ShootingConfig()
    recs = _records(p, n_max, cfg, records)
    mags = [abs(r.lambda_shoot) for r in sorted(recs, key=lambda r: r.n) if r.lambda_shoot is not None]
    ok = len(mags) == len(recs) and all(b > a for a, b in zip(mags, mags[1:]))
    return CheckResult("monotonic", ok, 0.0, {"roots": len(mags), "strictly_increasing": ok})


def residual_trend(records, n_lo=5, n_hi=20):
    """(residuals by n, lower-half median, upper-half median)."""
    res = {r.n: r.residual for r in records if n_lo <= r.n <= n_hi}
    ns = sorted(res)
    half = len(ns) // 2
    lo = float(np.median([res[n] for n in ns[:half]]))
    hi = float(np.median([res[n] for n in ns[-half:]]))
    return res, lo, hi


def check_residual(p, n_max=20, cfg=None, records=None, n_lo=5):
    cfg = cfg or ShootingConfig()
    recs = _records(p, n_max, cfg, records)
    res, lo, hi = residual_trend(recs, n_lo, n_max)
    first, last = res.get(n_lo, math.nan), res.get(n_max, math.nan)
    ok = hi < lo and last < first / 3
    measured = {
        "median_lower_half": f"{lo:.4e}",
        "median_upper_half": f"{hi:.4e}",
        f"residual_{n_lo}": f"{first:.4e}",
        f"residual_{n_max}": f"{last:.4e}",
        "ratio": f"{first / last:.3f}",
    }
    return CheckResult("residual", ok, 3.0, measured)


def check_bender(m, tol=1e-12):
    ratio = float(bender_constant_check(m, tol=None))
    return CheckResult("bender", abs(ratio - 1) < tol, tol, {"m": m, "ratio": repr(ratio)})


def expansion_error_exponent(m):
    """Exponent of the first term dropped from the truncated L expansion."""
    return 0.5 - ladder_depth(m) / m


def check_L_expansion(p, lams=(1e3, 2e3, 4e3), factor=2.0):
    """Residual ratio on doubling |lambda| against 2^(-exponent), within ``factor``."""
    K = K_table(p, DEFAULT)
    resid = [abs(L_numeric(p, lam) - L_expansion(p, lam, K)) for lam in lams]
    expected = 2 ** (-expansion_error_exponent(p.degree))
    ratios = [a / b for a, b in zip(resid, resid[1:])]
    ok = all(expected / factor <= r <= expected * factor for r in ratios)
    measured = {f"residual(lambda={l:g})": f"{r:.4e}" for l, r in zip(lams, resid)}
    measured["ratios"] = [round(r, 4) for r in ratios]
    measured["expected_ratio"] = round(expected, 4)
    return CheckResult("Lexpansion", ok, factor, measured)


SUITES = ("wronskian", "reality", "monotonic", "residual", "bender", "Lexpansion")


def run_suite(name, p, n_max=None, cfg=None):
    if name == "bender":
        return check_bender(p.degree)
    if name == "wronskian":
        return check_wronskian(p, cfg=cfg)
    if name == "Lexpansion":
        return check_L_expansion(p)
    if name == "reality":
        return check_reality(p, n_max or 15, cfg)
    if name == "monotonic":
        return check_monotonic(p, n_max or 15, cfg)
    if name == "residual":
        return check_residual(p, n_max or 20, cfg)
    raise ValueError(f"unknown suite {name!r}")
