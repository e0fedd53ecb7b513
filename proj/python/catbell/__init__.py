"""Bell-CHSH correlator toolkit for two-mode entangled cat states."""

from ._core import (
    TSIRELSON_BOUND,
    CatStateParams,
    ChshValue,
    Classification,
    MeasurementSettings,
    Mode,
    OptimizationResult,
    ScanRecord,
    cat_state_vector,
    chsh,
    coherent_overlap,
    coherent_state,
    correlator,
    dichotomic_matrix,
    displacement_matrix,
    joint_projector_expectation,
    make_cat_state,
    maximize_violation,
    maximize_violation_fixed_state,
    min_cutoff,
    oracle_chsh,
    oracle_correlator,
    projector_expectation,
    reliable_dim,
    run_scan,
    weyl_compose,
)

__all__ = [
    "TSIRELSON_BOUND",
    "CatStateParams",
    "ChshValue",
    "Classification",
    "MeasurementSettings",
    "Mode",
    "OptimizationResult",
    "ScanRecord",
    "cat_state_vector",
    "chsh",
    "coherent_overlap",
    "coherent_state",
    "correlator",
    "dichotomic_matrix",
    "displacement_matrix",
    "joint_projector_expectation",
    "make_cat_state",
    "maximize_violation",
    "maximize_violation_fixed_state",
    "min_cutoff",
    "oracle_chsh",
    "oracle_correlator",
    "projector_expectation",
    "reliable_dim",
    "run_scan",
    "weyl_compose",
]
