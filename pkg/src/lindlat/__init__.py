"""Lindblad master equations on asymmetric-hopping lattices.

Builds lattice Hamiltonians and jump operators, assembles and diagonalizes
vectorized Liouvillians, extracts steady states, gaps, and critical scaling,
and runs the non-Hermitian sensor experiments with and without disorder.
All energies are in units of the tunneling rate (set to 1).
"""

__version__ = "0.1.0"

from .linalg import kron, vectorize, devectorize, hs_inner
from .models import (
    LatticeSpec,
    HNParams,
    SSHParams,
    DisorderSpec,
    SpinModelParams,
    build_hn_hamiltonian,
    split_real_imag,
    build_euclidean,
    analytic_spectrum,
    hn_spectrum_numeric,
    analytic_right_eigenvector,
    biorthogonal_zero_modes,
    build_perturbation,
    build_disorder,
    build_ssh_hamiltonian,
    build_spin_bistability,
)
from .liouvillian import (
    JumpSet,
    LiouvillianModel,
    FockLatticeView,
    jump_local,
    jump_collective,
    effective_nh_hamiltonian,
    build_liouvillian,
    build_hn_lme,
    fock_lattice_view,
)
from .spectral import (
    SpectralResult,
    ScalingFit,
    SteadyStateResult,
    eig_full,
    steady_state,
    liouvillian_gap,
    gap_scaling_fit,
    spectral_displacement,
)
from .dynamics import (
    PropagationSpec,
    propagate_lme,
    propagate_nh,
    autocorrelation,
    perturbed_zero_shift,
)
from .observables import (
    position_operator,
    scaled_position,
    width,
    purity,
    fidelity_with_pure,
    validate_physical,
    hn_occupations,
)
from .experiments import (
    ExperimentConfig,
    ConfigError,
    SensorWindow,
    run_scenario,
)

__all__ = [
    "__version__",
    "kron", "vectorize", "devectorize", "hs_inner",
    "LatticeSpec", "HNParams", "SSHParams", "DisorderSpec", "SpinModelParams",
    "build_hn_hamiltonian", "split_real_imag", "build_euclidean",
    "analytic_spectrum", "hn_spectrum_numeric", "analytic_right_eigenvector",
    "biorthogonal_zero_modes",
    "build_perturbation", "build_disorder", "build_ssh_hamiltonian",
    "build_spin_bistability",
    "JumpSet", "LiouvillianModel", "FockLatticeView",
    "jump_local", "jump_collective", "effective_nh_hamiltonian",
    "build_liouvillian", "build_hn_lme", "fock_lattice_view",
    "SpectralResult", "ScalingFit", "SteadyStateResult",
    "eig_full", "steady_state", "liouvillian_gap", "gap_scaling_fit",
    "spectral_displacement",
    "PropagationSpec", "propagate_lme", "propagate_nh",
    "autocorrelation", "perturbed_zero_shift",
    "position_operator", "scaled_position", "width", "purity",
    "fidelity_with_pure", "validate_physical", "hn_occupations",
    "ExperimentConfig", "ConfigError", "SensorWindow", "run_scenario",
]
