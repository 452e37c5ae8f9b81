//! Controllability of pairs (A, b): Kalman matrices and ranks, the PBH
//! left-eigenvector test, control synthesis and certified uncontrollable pairs.

mod construct;
mod kalman;
mod pbh;
mod system;

pub use construct::{construct_uncontrollable, UncontrollablePair, UncontrollableRecord};
pub use kalman::{
    default_rank_tol, exact_rank, exact_rank_rational, kalman_exact, kalman_matrix,
    kalman_numeric_rank, numeric_rank, numeric_rank_with_tol, KalmanMatrix, KalmanRecord,
    EXACT_RANK_MAX_N,
};
pub use pbh::{
    is_controllable, is_controllable_exact, is_controllable_with, is_integer_pair,
    minimal_controllability_scan, pbh_min_overlap, ControlMode, ControlTolerances,
    ControllabilityReport, PBH_TOL,
};
pub use system::{replay_error, simulate_lti, solve_control};
