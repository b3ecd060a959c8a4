//! Logit quantal response equilibria: the response map, fixed-point solves
//! at a given rationality `lambda`, and continuation of the principal branch
//! from the centroid at `lambda = 0`.

mod branch;
mod response;
mod solver;

pub use branch::{
    default_lambda_max, limit_equilibrium, trace_branch, BranchOptions, BranchSample, BranchTrace, LimitEquilibrium,
    LimitLabel, Termination, LAMBDA_RANGE_PRODUCT,
};
pub use response::{logit_response, LogitParams, ResponseMap};
pub use solver::{fixed_point_residual, solve_fixed_point, FixedPointResult, SolverSettings};
