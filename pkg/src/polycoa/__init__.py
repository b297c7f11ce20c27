"""Numerical toolkit for assisted-entanglement bounds.

Core pieces: an upper bound on the concurrence of assistance built from
fidelities with subspace-flipped states, polygamy inequality checkers for
multipartite pure states, and a decomposition-search oracle that lower
bounds the same quantity independently.
"""
from .concurrence import (
    PairIndexSpace,
    TauReport,
    generator_L,
    pair_space,
    pure_concurrence,
    pure_concurrence_coefficients,
    pure_state_tau_gap,
    rho_tilde,
    subspace_term,
    tau_a,
    tau_a_pure_cut,
    two_qubit_coa,
    wootters_concurrence,
)
from .linalg import (
    ConvergenceError,
    EigenSystem,
    fidelity,
    fidelity_from_root,
    hermitian_eigensystem,
    partial_trace,
    psd_sqrt,
    psd_sqrt_with_rank,
)
from .oracle import OracleResult, bound_consistency_check, optimize_coa_lower_bound
from .polygamy import (
    PolygamyReport,
    polygamy_report_general,
    polygamy_report_multiqubit,
    subspace_sum_diagnostic,
)
from .qtypes import DensityMatrix, Ensemble, Ket
from .states import (
    basis_ket,
    bipartition_dm,
    bipartition_ket,
    ensemble_from_isometry,
    ghz_state,
    haar_random_pure,
    load_state,
    random_mixed_state,
    save_state,
    w_class_state,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DensityMatrix",
    "EigenSystem",
    "Ensemble",
    "Ket",
    "OracleResult",
    "PairIndexSpace",
    "PolygamyReport",
    "TauReport",
    "basis_ket",
    "bipartition_dm",
    "bipartition_ket",
    "bound_consistency_check",
    "ensemble_from_isometry",
    "fidelity",
    "fidelity_from_root",
    "generator_L",
    "ghz_state",
    "haar_random_pure",
    "hermitian_eigensystem",
    "load_state",
    "optimize_coa_lower_bound",
    "pair_space",
    "partial_trace",
    "polygamy_report_general",
    "polygamy_report_multiqubit",
    "psd_sqrt",
    "psd_sqrt_with_rank",
    "pure_concurrence",
    "pure_concurrence_coefficients",
    "pure_state_tau_gap",
    "random_mixed_state",
    "rho_tilde",
    "save_state",
    "subspace_sum_diagnostic",
    "subspace_term",
    "tau_a",
    "tau_a_pure_cut",
    "two_qubit_coa",
    "w_class_state",
    "wootters_concurrence",
]
