"""Dissipative networks of coupled harmonic oscillators relaxing to a correlated Gibbs state."""

from .bogoliubov import BogoliubovModel, to_canonical, two_mode_drift
from .diffusion import (
    assemble_diffusion,
    compare_diffusion,
    cross_diffusion,
    diagonal_diffusion,
    einstein_report,
    phi_psi_gamma_residuals,
    verify_cp_constraints,
)
from .dynamics import (
    NotHurwitzError,
    drift_matrix,
    evolve_covariance,
    gibbs_covariance,
    matrix_exponential,
    oracle_diffusion,
    solve_steady_state,
)
from .entanglement import (
    NegativityTrajectory,
    SqueezedThermalSpec,
    critical_squeezing,
    log_negativity,
    squeezed_thermal_covariance,
    sudden_death_time,
)
from .model import (
    EquilibriumSpec,
    LindbladSpec,
    OscillatorNetwork,
    PhysicsError,
    StructureError,
    UnitSystem,
    UnstableEquilibriumError,
    hamiltonian_matrix,
    validate_model,
)

__all__ = [
    "BogoliubovModel",
    "EquilibriumSpec",
    "LindbladSpec",
    "NegativityTrajectory",
    "NotHurwitzError",
    "OscillatorNetwork",
    "PhysicsError",
    "SqueezedThermalSpec",
    "StructureError",
    "UnitSystem",
    "UnstableEquilibriumError",
    "assemble_diffusion",
    "compare_diffusion",
    "critical_squeezing",
    "cross_diffusion",
    "diagonal_diffusion",
    "drift_matrix",
    "einstein_report",
    "evolve_covariance",
    "gibbs_covariance",
    "hamiltonian_matrix",
    "log_negativity",
    "matrix_exponential",
    "oracle_diffusion",
    "phi_psi_gamma_residuals",
    "solve_steady_state",
    "squeezed_thermal_covariance",
    "sudden_death_time",
    "to_canonical",
    "two_mode_drift",
    "validate_model",
    "verify_cp_constraints",
]

__version__ = "0.1.0"
