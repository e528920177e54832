"""Shooting oracle for the spectral determinant W_{-1,1}(a, lambda)."""
from .core import (
    DetValue,
    EigenvalueRecord,
    Geometry,
    ShootingConfig,
    classify,
    enumerate_eigenvalues,
    find_eigenvalue,
    integrate_ray,
    make_geometry,
    scan_real_axis,
    spectral_det,
    thread_cap,
    wronskian,
)
from .seed import F_phase, Seed, boundary_seed, frame, wkb_series

__all__ = [
    "DetValue",
    "EigenvalueRecord",
    "Geometry",
    "ShootingConfig",
    "Seed",
    "F_phase",
    "boundary_seed",
    "classify",
    "enumerate_eigenvalues",
    "find_eigenvalue",
    "frame",
    "integrate_ray",
    "make_geometry",
    "scan_real_axis",
    "spectral_det",
    "thread_cap",
    "wkb_series",
    "wronskian",
]
