"""Coined quantum walks on the line with a single-site phase defect.

The package splits along the natural seams of the problem: `core` holds
the domain types, `walk` the exact pure-state evolution and observables,
`spectral` the bound-state analysis on a finite ring, `classical` the
random-walk baseline, `emulate` the dephasing and counting-statistics
model, and `cli` the command-line front end.
"""

__version__ = "0.1.0"

from .core import (
    CoinAngle,
    CoinState,
    ConsistencyError,
    DefectSpec,
    NAMED_STATES,
    PureState,
    ValidationError,
    WalkConfig,
    WalkError,
    coin_matrix,
    make_initial,
    named_state,
)
from .walk import (
    Distribution,
    SweepTable,
    TrajectoryRecord,
    apply_coin,
    apply_shift,
    evolve,
    mean_position,
    position_distribution,
    step,
    sweep_coin,
    sweep_phase,
    tv_distance,
    variance,
)
from .classical import RWSpec, diabatic_probability, rw_distribution, rw_variance
from .spectral import (
    LatticeSpec,
    SpectralReport,
    analyze,
    build_step_unitary,
    classify_localized,
    eigendecompose,
    overlap,
    sweep_overlap_coin,
    sweep_overlap_phase,
)
from .emulate import (
    CountTable,
    DensityState,
    EmulationConfig,
    StepCounts,
    density_step,
    estimate_with_errors,
    evolve_with_visibility,
    rng_for,
    sample_counts,
)

__all__ = [
    "CoinAngle",
    "CoinState",
    "ConsistencyError",
    "CountTable",
    "DefectSpec",
    "DensityState",
    "Distribution",
    "EmulationConfig",
    "LatticeSpec",
    "NAMED_STATES",
    "PureState",
    "RWSpec",
    "SpectralReport",
    "StepCounts",
    "SweepTable",
    "TrajectoryRecord",
    "ValidationError",
    "WalkConfig",
    "WalkError",
    "analyze",
    "apply_coin",
    "apply_shift",
    "build_step_unitary",
    "classify_localized",
    "coin_matrix",
    "density_step",
    "diabatic_probability",
    "eigendecompose",
    "estimate_with_errors",
    "evolve",
    "evolve_with_visibility",
    "make_initial",
    "mean_position",
    "named_state",
    "overlap",
    "position_distribution",
    "rng_for",
    "rw_distribution",
    "rw_variance",
    "sample_counts",
    "step",
    "sweep_coin",
    "sweep_overlap_coin",
    "sweep_overlap_phase",
    "sweep_phase",
    "tv_distance",
    "variance",
]
