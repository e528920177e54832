"""Spectral determinant by shooting, and its zeros.

f_{-1} and f_1 are seeded far out on the centre rays of S_{-1} and S_1 and
integrated inward.  Each path runs radially down to the turning-point
radius rho_t and then vertically onto the real axis at
x* = rho_t cos(2 pi/(m+2)).  Stopping at rho_t keeps the inward integration in
the region where the wanted solution dominates.  On the vertical leg the
two WKB branches keep comparable size, so the Wronskian taken at x* does
not suffer the cancellation it has at z = 0 when |lambda| is large.
"""
from __future__ import annotations

import cmath
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace

import numpy as np

from ..errors import (
    DuplicateRootError,
    IntegrationError,
    NoRootError,
    PTSpectraError,
    SeedAccuracyError,
)
from ..expansion import build_table, lambda0, level_spacing, predict_expansion
from ..potential import Potential
from ..series import compute_mu_nu
from ..kernels import taylor_segment
from .seed import _unit, boundary_seed

__all__ = [
    "ShootingConfig",
    "Geometry",
    "DetValue",
    "EigenvalueRecord",
    "make_geometry",
    "integrate_ray",
    "wronskian",
    "spectral_det",
    "find_eigenvalue",
    "scan_real_axis",
    "enumerate_eigenvalues",
    "thread_cap",
]


@dataclass(frozen=True)
class ShootingConfig:
    start_radius: float | None = None  # None: chosen from the seed error estimate
    min_radius: float = 6.0
    radius_factor: float = 4.0  # R >= radius_factor * max|root of Q|
    ode_rel_tol: float = 1e-14
    ode_abs_tol: float = 1e-300
    taylor_order: int = 30
    max_steps: int = 2_000_000
    wkb_order: int = 8
    series_order: int = 48
    seed_tol: float = 1e-13
    newton_tol: float = 1e-12
    # accept once steps stall below this (determinant noise floor)
    newton_stall_tol: float = 1e-9
    newton_max_iter: int = 40
    fd_rel_step: float = 1e-5
    deflation_radius: float = 1e-6
    reality_tol: float = 1e-6
    scan_start: float = -2.0
    scan_density: float = 8.0  # grid points per level spacing
    threads: int | None = None

    def __post_init__(self):
        if self.start_radius is not None and self.start_radius <= 0:
            raise ValueError("start_radius must be positive")
        if self.ode_rel_tol <= 0 or self.newton_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.taylor_order < 4:
            raise ValueError("taylor_order must be at least 4")
        if self.newton_max_iter < 1:
            raise ValueError("newton_max_iter must be positive")

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]


def thread_cap(cfg=None):
    if cfg is not None and cfg.threads:
        return max(1, int(cfg.threads))
    env = os.environ.get("PT_SPECTRA_THREADS")
    if env:
        return max(1, int(env))
    return 1


# ---------------------------------------------------------------- geometry

@dataclass(frozen=True)
class Geometry:
    """Start radius and matching point, frozen for one root search."""

    m: int
    radius: float
    rho_t: float
    x_match: float


def _root_radius(p, lam):
    return float(np.max(np.abs(np.roots(p.poly_with(lam)))))


def make_geometry(p, lam, cfg):
    from .seed import frame, seed_from_frame

    m = p.degree
    rho = _root_radius(p, lam)
    rho_t = max(rho, 0.5)
    x_match = rho_t * math.cos(2 * math.pi / (m + 2))
    if cfg.start_radius is not None:
        R = float(cfg.start_radius)
        if R <= 1.5 * rho:
            raise SeedAccuracyError(
                f"start_radius {R} is too close to the turning points (|root| <= {rho:.3g})"
            )
        return Geometry(m, R, rho_t, x_match)
    R = max(cfg.min_radius, cfg.radius_factor * rho)
    pk, lamk = frame(p, lam, 1)
    for _ in range(60):
        err = seed_from_frame(pk, lamk, R, cfg.wkb_order, cfg.series_order)[2]
        if err <= cfg.seed_tol:
            return Geometry(m, R, rho_t, x_match)
        R *= 1.25
    raise SeedAccuracyError(f"no start radius met seed_tol={cfg.seed_tol}")


def _path(geom, k):
    w = _unit(k, geom.m + 2)
    return [geom.radius * w, geom.rho_t * w, complex(geom.x_match)]


# ---------------------------------------------------------------- integration

@dataclass(frozen=True)
class RaySolution:
    z: complex
    v: complex
    dv: complex
    log_scale: float  # true (f, f') = exp(log_scale) * (v, dv)
    steps: int


def integrate_ray(p, lam, k, cfg=None, geom=None, end=None):
    """f_k and f_k' at the end of its path (x* by default, or ``end`` on the ray)."""
    cfg = cfg or ShootingConfig()
    geom = geom or make_geometry(p, lam, cfg)
    k = int(getattr(k, "k", k))
    seed = boundary_seed(p, lam, k, geom.radius, cfg.wkb_order, cfg.series_order)
    pts = _path(geom, k) if end is None else [geom.radius * _unit(k, geom.m + 2), complex(end)]
    q = p.poly_with(lam)[::-1]
    v = cmath.exp(1j * seed.log_f.imag)
    dv = seed.ratio * v
    log_scale = seed.log_f.real
    total = 0
    tol = cfg.ode_rel_tol + cfg.ode_abs_tol
    for z0, z1 in zip(pts[:-1], pts[1:]):
        v, dv, ls, n = taylor_segment(q, z0, z1, v, dv, cfg.taylor_order, tol, cfg.max_steps)
        if n < 0:
            reason = "step budget exhausted" if n == -1 else "step size underflow"
            raise IntegrationError(f"integration of f_{k} failed between {z0:.4g} and {z1:.4g}: {reason}")
        if not (np.isfinite(v) and np.isfinite(dv) and math.isfinite(ls)):
            raise IntegrationError(f"overflow while integrating f_{k}")
        log_scale += ls
        total += n
    return RaySolution(pts[-1], complex(v), complex(dv), float(log_scale), total)


def _wr(s1, s2):
    return s1.v * s2.dv - s1.dv * s2.v, s1.log_scale + s2.log_scale


def wronskian(p, lam, j, k, cfg=None, geom=None):
    """W_{j,k} = f_j f_k' - f_j' f_k as a complex number (may overflow to inf)."""
    cfg = cfg or ShootingConfig()
    geom = geom or make_geometry(p, lam, cfg)
    w, ls = _wr(integrate_ray(p, lam, j, cfg, geom), integrate_ray(p, lam, k, cfg, geom))
    return complex(w * math.exp(ls)) if ls < 700 else complex(w * math.inf)


@dataclass(frozen=True)
class DetValue:
    """D = W_{-1,1} / (2i) = mantissa * exp(log_scale).

    Dividing by 2i makes D real on the real lambda axis when a is real.
    """

    mantissa: complex
    log_scale: float

    @property
    def value(self):
        return self.mantissa * math.exp(self.log_scale) if self.log_scale < 700 else self.mantissa * math.inf

    def rescaled(self, log_ref):
        return self.mantissa * math.exp(self.log_scale - log_ref)


def spectral_det(p, lam, cfg=None, geom=None):
    cfg = cfg or ShootingConfig()
    geom = geom or make_geometry(p, lam, cfg)
    w, ls = _wr(integrate_ray(p, lam, -1, cfg, geom), integrate_ray(p, lam, 1, cfg, geom))
    return DetValue(complex(w / 2j), float(ls))


def _map(fn, items, cfg):
    n = thread_cap(cfg)
    if n <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------- roots

def find_eigenvalue(p, lam_seed, cfg=None, accepted=(), geom=None):
    """Finite-difference Newton on D; returns (root, |D| residual)."""
    cfg = cfg or ShootingConfig()
    lam = complex(lam_seed)
    geom = geom or make_geometry(p, lam if lam != 0 else 1.0, cfg)
    det = lambda x: spectral_det(p, x, cfg, geom)
    resid = prev = math.inf
    for _ in range(cfg.newton_max_iter):
        h = cfg.fd_rel_step * max(abs(lam), 1.0)
        d0, dp, dm = det(lam), det(lam + h), det(lam - h)
        ref = d0.log_scale
        slope = (dp.rescaled(ref) - dm.rescaled(ref)) / (2 * h)
        if slope == 0 or not np.isfinite(slope):
            raise NoRootError("flat or non-finite determinant slope", last=lam, residual=resid)
        step = d0.mantissa / slope
        resid = abs(step) / max(abs(lam), 1.0)
        lam = lam - step
        if resid < cfg.newton_tol:
            break
        if resid < cfg.newton_stall_tol and resid > 0.5 * prev:
            break
        prev = resid
    else:
        raise NoRootError(
            f"Newton did not converge from seed {lam_seed}", last=lam, residual=resid
        )
    for other in accepted:
        if abs(lam - other) <= cfg.deflation_radius * max(abs(lam), 1.0):
            raise DuplicateRootError(f"root {lam} already found", root=lam)
    return lam, resid


def scan_real_axis(p, lam_hi, cfg=None, lam_lo=None):
    """Brackets of sign changes of D along the real axis (a must be real)."""
    cfg = cfg or ShootingConfig()
    m = p.degree
    lam_lo = cfg.scan_start if lam_lo is None else lam_lo
    floor = lambda0(m, 0)
    grid = [lam_lo]
    while grid[-1] < lam_hi:
        grid.append(grid[-1] + level_spacing(m, max(grid[-1], floor)) / cfg.scan_density)
    vals = _map(lambda x: spectral_det(p, x, cfg).mantissa.real, grid, cfg)
    out = []
    for (x0, d0), (x1, d1) in zip(zip(grid, vals), zip(grid[1:], vals[1:])):
        if d0 == 0:
            out.append((x0, x0))
        elif d0 * d1 < 0:
            out.append((x0, x1))
    return out


@dataclass
class EigenvalueRecord:
    n: int
    lambda_pred: complex
    lambda_shoot: complex | None
    residual: float
    classification: str
    det_at_root: float
    flags: list = field(default_factory=list)
    error: str | None = None

    def as_row(self):
        return {
            "n": self.n, "lambda_pred": self.lambda_pred, "lambda_shoot": self.lambda_shoot,
            "residual": self.residual, "classification": self.classification,
            "det_at_root": self.det_at_root, "flags": ";".join(self.flags), "error": self.error or "",
        }


def classify(lam, reality_tol):
    if lam is None:
        return "unresolved"
    if abs(lam.imag) <= reality_tol * abs(lam):
        return "real-positive" if lam.real > 0 else "real-nonpositive"
    return "conjugate-pair-member"


def _record(p, n, lam, resid, table, cfg, error=None):
    m = p.degree
    pred = predict_expansion(table, n)
    scale = lambda0(m, n, table.Km) ** (0.5 - 1 / m)
    if lam is None:
        return EigenvalueRecord(n, pred, None, math.nan, "unresolved", math.nan, ["failed"], error)
    cls = classify(lam, cfg.reality_tol)
    if cls == "conjugate-pair-member" and not p.is_pt_symmetric():
        cls = "unresolved"
    return EigenvalueRecord(n, pred, lam, float(abs(lam - pred) / scale), cls, float(resid))


def enumerate_eigenvalues(p, N, cfg=None, n_min=0, table=None):
    """Eigenvalues with indices n_min..N as EigenvalueRecords sorted by |lambda|."""
    if N < 1:
        raise ValueError("N must be >= 1")
    cfg = cfg or ShootingConfig()
    m = p.degree
    table = table or build_table(p)
    found = []
    if p.is_pt_symmetric():
        lam_hi = predict_expansion(table, N).real + 2 * level_spacing(m, lambda0(m, N))
        brackets = []
        for _ in range(4):
            brackets = scan_real_axis(p, lam_hi, cfg)
            if len(brackets) >= N + 1:
                break
            lam_hi += 4 * level_spacing(m, lam_hi)
        seeds = [0.5 * (lo + hi) for lo, hi in brackets[: N + 1]]
    else:
        seeds = [predict_expansion(table, n) for n in range(N + 1)]

    def solve(seed):
        try:
            lam, resid = find_eigenvalue(p, seed, cfg)
            return lam, resid, None
        except PTSpectraError as exc:
            return None, math.nan, f"{type(exc).__name__}: {exc}"

    results = _map(solve, seeds, cfg)
    records = []
    accepted = []
    for n, (lam, resid, err) in enumerate(results):
        if n < n_min:
            if lam is not None:
                accepted.append(lam)
            continue
        rec = _record(p, n, lam, resid, table, cfg, err)
        if lam is not None and any(
            abs(lam - o) <= cfg.deflation_radius * max(abs(lam), 1.0) for o in accepted
        ):
            rec.flags.append("duplicate")
        if lam is not None:
            accepted.append(lam)
        records.append(rec)
    missing = N + 1 - len(seeds)
    for n in range(len(seeds), N + 1):
        records.append(_record(p, n, None, math.nan, table, cfg, "no sign change found"))
    records.sort(key=lambda r: (r.lambda_shoot is None, abs(r.lambda_shoot) if r.lambda_shoot is not None else r.n))
    prev = None
    for rec in records:
        if rec.lambda_shoot is None:
            continue
        if prev is not None and not abs(rec.lambda_shoot) > abs(prev):
            rec.flags.append("non-monotonic")
        if rec.classification == "conjugate-pair-member":
            rec.flags.append("non-real")
        prev = rec.lambda_shoot
    return records
