"""Correlation engine for two-spin entangled states.

Builds entangled-state density operators split into local (classical) and
non-local (coherence) parts, evaluates spin and particle-number measurement
correlations along arbitrary directions, checks the three-direction Wigner
inequality against an explicit hidden-variable population model, simulates
finite-shot experiments, and searches measurement angles for the maximal
quantum violations (1/2 for the Wigner correlator, 2*sqrt(2) for CHSH).
"""

from .spin_core import (
    Direction,
    DensityMatrix,
    EntangledState,
    OutcomeDistribution,
    Part,
    Polarization,
    Spinor,
    basis_vectors,
    bell_parallel,
    coherent_pair,
    density,
    measurement_basis,
    outcome_distribution,
    singlet,
    triplet,
)
from .correlations import (
    CorrelationBreakdown,
    MINUS_MINUS,
    MINUS_PLUS,
    PLUS_MINUS,
    PLUS_PLUS,
    SignPair,
    canonical_sign_pairs,
    chsh,
    chsh_breakdown,
    closed_number_local,
    closed_number_nonlocal,
    closed_spin_local,
    closed_spin_nonlocal,
    closed_wigner_local,
    closed_wigner_local_half_angle,
    closed_wigner_nonlocal,
    closed_wigner_total,
    number_correlation,
    spin_correlation,
    wigner_bound_F,
    wigner_chain_bound,
    wigner_w,
)
from .lhv_oracle import (
    Population8,
    SIGN_TRIPLES,
    WignerCheck,
    bridged_correlation,
    population_correlation,
    population_from_local_state,
    verify_wigner,
)
from .sampler import (
    Estimate,
    ShotCounts,
    estimate_number_correlation,
    estimate_wigner,
    experiment_generator,
    sample_outcomes,
)
from .optimizer import (
    ANGLE_NAMES,
    OptimizationResult,
    ScanCapacityError,
    ScanRow,
    SearchConfig,
    maximize_chsh,
    maximize_w,
    scan_w,
)

__version__ = "0.1.0"

__all__ = [
    "ANGLE_NAMES",
    "CorrelationBreakdown",
    "DensityMatrix",
    "Direction",
    "EntangledState",
    "Estimate",
    "MINUS_MINUS",
    "MINUS_PLUS",
    "OptimizationResult",
    "OutcomeDistribution",
    "PLUS_MINUS",
    "PLUS_PLUS",
    "Part",
    "Polarization",
    "Population8",
    "SIGN_TRIPLES",
    "ScanCapacityError",
    "ScanRow",
    "SearchConfig",
    "ShotCounts",
    "SignPair",
    "Spinor",
    "WignerCheck",
    "basis_vectors",
    "bell_parallel",
    "bridged_correlation",
    "canonical_sign_pairs",
    "chsh",
    "chsh_breakdown",
    "closed_number_local",
    "closed_number_nonlocal",
    "closed_spin_local",
    "closed_spin_nonlocal",
    "closed_wigner_local",
    "closed_wigner_local_half_angle",
    "closed_wigner_nonlocal",
    "closed_wigner_total",
    "coherent_pair",
    "density",
    "estimate_number_correlation",
    "estimate_wigner",
    "experiment_generator",
    "maximize_chsh",
    "maximize_w",
    "measurement_basis",
    "number_correlation",
    "outcome_distribution",
    "population_correlation",
    "population_from_local_state",
    "sample_outcomes",
    "scan_w",
    "singlet",
    "spin_correlation",
    "triplet",
    "verify_wigner",
    "wigner_bound_F",
    "wigner_chain_bound",
    "wigner_w",
]
