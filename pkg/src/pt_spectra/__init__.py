"""Eigenvalues of PT-symmetric polynomial oscillators.

Solves -u'' - [(iz)^m + P_{m-1}(iz)] u = lambda u on the real line, both
through a large-n asymptotic expansion and through a complex shooting
solver for the spectral determinant.
"""
from .errors import (
    DomainError,
    DuplicateRootError,
    IntegrationError,
    InvalidDegreeError,
    NoRootError,
    PTSpectraError,
    QuadratureError,
    SeedAccuracyError,
    SingularInputError,
    UnsupportedOrderError,
)
from .expansion import (
    ExpansionTable,
    Prediction,
    bender_constant_check,
    build_table,
    lambda0,
    predict,
    predict_expansion,
    predict_quantization,
)
from .kernels import NUMBA_ENABLED
from .potential import Potential, SectorIndex, omega
from .quadrature import QuadratureConfig, K_m_closed, K_m_quad, K_mj, L_expansion, L_numeric
from .series import CoefficientLadder, compute_b, compute_bjk, compute_mu_nu
from .shooting import (
    EigenvalueRecord,
    ShootingConfig,
    enumerate_eigenvalues,
    find_eigenvalue,
    spectral_det,
    wronskian,
)

__version__ = "0.1.0"
