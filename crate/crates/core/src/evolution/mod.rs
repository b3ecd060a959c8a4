//! Evolutionary assessments: the closed-form weak-selection deviation `phi`
//! and a two-population Moran imitation process with uniform mutation.

mod moran;
mod phi;
mod report;

pub use moran::{moran_simulate, moran_simulate_recorded, MoranConfig, MoranEstimate, Snapshot, Trajectory};
pub use phi::{abundance_order, phi_assessment, selection_favors, Assessment, Ranking};
pub use report::{compare_with_phi, phi_vs_moran_report, PhiMoranEntry, PhiMoranReport, Verdict, WEAK_SELECTION_LIMIT};
