//! Numerical toolkit for two-player normal-form games: logit quantal
//! response equilibria and their continuation in the rationality parameter,
//! weak-selection assessments and a two-population Moran process, and probes
//! that measure how each of these reacts to duplicating a column.
//!
//! Game representation, equivalence and the closed-form assessment are
//! generic over [`Payoff`] (floats or exact rationals); the smooth maps are
//! generic over [`Real`]. The aliases below fix common choices.
//!
//! ```
//! use framing_core::{gen_coordination, phi_assessment, PlayerSide};
//!
//! let one = phi_assessment(&gen_coordination(60.0, 1), PlayerSide::Row);
//! let two = phi_assessment(&gen_coordination(60.0, 2), PlayerSide::Row);
//! assert_eq!(one.values, vec![-5.0, 5.0]);
//! assert_eq!(two.values, vec![3.75, -3.75]);
//! ```

pub mod dominance;
pub mod equivalence;
pub mod error;
pub mod evolution;
pub mod framing;
pub mod game;
pub mod generate;
pub mod io;
mod linalg;
pub mod qre;
pub mod scalar;

pub use dominance::{strictly_dominated, DominanceMode};
pub use equivalence::{canonical_form, duplicate_column, equivalent, near_duplicate_columns, reduce};
pub use error::{Error, Result};
pub use evolution::{
    abundance_order, moran_simulate, phi_assessment, phi_vs_moran_report, selection_favors, Assessment, MoranConfig,
    MoranEstimate, Ranking,
};
pub use framing::{derivative_probe, frame_sensitivity, theorem_enactment, Assessor, FramingReport};
pub use game::{expected_payoffs, Game, MixedProfile, PlayerSide};
pub use generate::{gen_coordination, gen_coordination_eps, gen_travelers};
pub use io::{load_game, save_game};
pub use qre::{
    limit_equilibrium, logit_response, solve_fixed_point, trace_branch, BranchOptions, BranchTrace, LogitParams,
    SolverSettings,
};
pub use scalar::{Payoff, Real};

/// Exact rational payoffs.
pub type Rational = num_rational::Ratio<i64>;

pub type Game32 = Game<f32>;
pub type Game64 = Game<f64>;
pub type GameQ = Game<Rational>;

pub type Profile32 = MixedProfile<f32>;
pub type Profile64 = MixedProfile<f64>;

pub type Assessment64 = Assessment<f64>;
pub type AssessmentQ = Assessment<Rational>;

pub type BranchTrace32 = BranchTrace<f32>;
pub type BranchTrace64 = BranchTrace<f64>;
