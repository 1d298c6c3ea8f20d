"""Harmonic oscillator on a circle, its f-deformed algebra and nonlinear coherent states."""
from ._errors import ConfigError, ConvergenceError, DomainError
from .algebra import (
    CurvatureContext,
    RhoMode,
    commutator_diagonal,
    deformation_f,
    deformation_f2,
    energy_from_deformation,
    energy_level,
    energy_shape_invariance,
    gamma_tilde,
    ladder_lower,
    ladder_raise,
    log_rho,
    log_rho_table,
    rho,
)
from .measure import (
    identity_resolution_check,
    measure_density_canonical,
    measure_density_flat,
    verify_moments,
)
from .spectral import CircleGeometry, gnomonic_map, potential_tangent, solve_spectrum_fd
from .states import StateVector, build_state, eigen_residual, normalization, standard_coherent_state
from .statistics import ladder_moments, photon_statistics, scan, squeezing

__version__ = "0.1.0"
