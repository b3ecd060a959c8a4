//! Framing effects: how an assessment changes across equivalent
//! representations of one game, finite-difference probes of its payoff
//! sensitivity, and the four-matrix construction showing why a smooth
//! assessment cannot be duplication invariant.

mod assessor;
mod probe;
mod sensitivity;
mod theorem;

pub use assessor::{shipped_assessor, Assessor, ConstantAssessor, NashArgmax, PhiAssessor, QreAtLambda, QreTerminal, SHIPPED_ASSESSORS};
pub use probe::{default_probe_step, derivative_probe, directional_probe};
pub use sensitivity::{
    enumerate_representations, frame_sensitivity, FramingReport, Representation, CONSISTENCY_TOLERANCE,
    MAX_REPRESENTATION_COLUMNS,
};
pub use theorem::{proof_matrices, theorem_enactment, TheoremOptions, TheoremRecord};
