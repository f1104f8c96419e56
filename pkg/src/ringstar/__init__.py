"""Qubit networks of antiferromagnetic rings coupled through a central ring.

The package covers the pipeline end to end: exact diagonalization of the
microscopic rings, extraction of effective two-level couplings, the analytic
single-excitation star model with its closed-form dynamics, the W-state and
block-transfer protocols, and an independent full-space cross-check.
"""
from .errors import (
    AnisotropyDivergenceError,
    ConfigError,
    ConstraintError,
    DimensionCapError,
    GroundDoubletError,
    InfeasibleError,
    RingStarError,
    ValidationError,
)
from .linalg import EigenSystem, hermitian_eigendecompose, unitary_evolve
from .rings import (
    QubitEncoding,
    RingSpec,
    SiteMatrixElements,
    build_ring_hamiltonian,
    doublet_matrix_elements,
    ground_doublet,
    regauge,
    ring_qubit_encoding,
    spin_operators,
    total_sz_operator,
)
from .coupling import (
    DeltaTransition,
    EffectivePair,
    Linker,
    SweepRow,
    b_sweep_evaluator,
    effective_coupling,
    find_delta_transitions,
    ring_pair_coupling,
    star_from_rings,
    sweep_anisotropy_ad,
    sweep_anisotropy_b,
)
from .star import (
    AnalyticEigenSystem,
    StarNetwork,
    analytic_eigensystem,
    basis_state,
    build_effective_hamiltonian,
    closed_form_from_center,
    closed_form_from_site,
    evolve_subspace,
    phase_angles,
    uniform_star,
)
from .protocols import (
    FidelityCurve,
    TransferProgram,
    WGenerationPlan,
    apply_phase_correction,
    equal_population_ratio,
    fidelity_curve,
    fluctuation_sweep,
    generation_error,
    make_transfer_program,
    plan_w_from_center,
    plan_w_from_site,
    w_state,
)
from .oracle import (
    CheckResult,
    ValidationReport,
    cross_validate,
    full_space_hamiltonian,
    single_excitation_indices,
    subspace_block,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticEigenSystem",
    "AnisotropyDivergenceError",
    "CheckResult",
    "ConfigError",
    "ConstraintError",
    "DeltaTransition",
    "DimensionCapError",
    "EffectivePair",
    "EigenSystem",
    "FidelityCurve",
    "GroundDoubletError",
    "InfeasibleError",
    "Linker",
    "QubitEncoding",
    "RingSpec",
    "RingStarError",
    "SiteMatrixElements",
    "StarNetwork",
    "SweepRow",
    "TransferProgram",
    "ValidationError",
    "ValidationReport",
    "WGenerationPlan",
    "analytic_eigensystem",
    "apply_phase_correction",
    "b_sweep_evaluator",
    "basis_state",
    "build_effective_hamiltonian",
    "build_ring_hamiltonian",
    "closed_form_from_center",
    "closed_form_from_site",
    "cross_validate",
    "doublet_matrix_elements",
    "effective_coupling",
    "equal_population_ratio",
    "evolve_subspace",
    "fidelity_curve",
    "find_delta_transitions",
    "fluctuation_sweep",
    "full_space_hamiltonian",
    "generation_error",
    "ground_doublet",
    "hermitian_eigendecompose",
    "make_transfer_program",
    "phase_angles",
    "plan_w_from_center",
    "plan_w_from_site",
    "ring_pair_coupling",
    "regauge",
    "ring_qubit_encoding",
    "single_excitation_indices",
    "spin_operators",
    "star_from_rings",
    "subspace_block",
    "sweep_anisotropy_ad",
    "sweep_anisotropy_b",
    "total_sz_operator",
    "unitary_evolve",
    "uniform_star",
    "w_state",
]
