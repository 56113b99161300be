//! Closed-form analysis of two-qubit projections on weighted fusions, with
//! the matching numerical checks.

mod classify;
mod entropy;
mod hyperbola;
mod local;
mod theorems;

pub use classify::{
    classify_projection, resulting_weight, tef_conditions_by_argument, tef_corrections, tef_unitarity, OutcomeClass,
    OutcomeTag, TefCorrection, TwoQubitProjection,
};
pub use entropy::{entanglement_report, inner_z, inner_z_neighbors, m_prime, EntanglementReport, ORACLE_TOLERANCE};
pub use hyperbola::{
    hyperbola_weight, max_entangled_family, max_entangled_residuals, solve_xi_for_weight, xi_projection, XiSolution,
};
pub use local::{local_equivalence, pair_weight_of_state, state_matrix, LocalEquivalence};
pub use theorems::{
    check_no_good_failure, pair_weight_from_projection, projected_pair_matrix, xlike_residual, xlike_scan_slice,
    xlike_uniqueness_scan, ylike_impossibility_scan, ylike_residual, ylike_scan_slice, NoGoodFailureReport, PairWeight, ScanGrid, ScanPoint, ScanReport,
    SolutionCase,
};
