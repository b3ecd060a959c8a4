use serde::Serialize;

use crate::error::Result;
use crate::evolution::moran::{moran_simulate, MoranConfig, MoranEstimate};
use crate::evolution::phi::{abundance_order, phi_assessment, Assessment};
use crate::game::{Game, PlayerSide};
use crate::scalar::Payoff;

/// `delta * payoff range` above which the weak-selection reading of `phi`
/// is flagged as unreliable.
pub const WEAK_SELECTION_LIMIT: f64 = 0.5;

/// Standard errors separating a deviation from zero.
const SEPARATION: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// Sign of `abundance - 1/k` matches the sign of `phi`, beyond noise.
    Agrees,
    /// `phi = 0` and the deviation is within noise.
    Neutral,
    /// Deviation within noise although `phi != 0`.
    Inconclusive,
    /// Opposite signs, beyond noise, or a resolved deviation where `phi = 0`.
    Disagrees,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiMoranEntry {
    pub side: PlayerSide,
    pub strategy: usize,
    pub phi: f64,
    /// `abundance - 1/k`.
    pub deviation: f64,
    pub std_error: f64,
    pub sign_agrees: bool,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiMoranReport {
    pub entries: Vec<PhiMoranEntry>,
    /// Per population: does the abundance ranking match the `phi` ranking?
    pub row_ordering_agrees: bool,
    pub col_ordering_agrees: bool,
    /// `delta * payoff range` exceeds [`WEAK_SELECTION_LIMIT`].
    pub weak_selection_warning: bool,
    /// `phi` assumes equally sized populations.
    pub unequal_population_warning: bool,
    pub estimate: MoranEstimate,
}

/// Simulates the Moran process and compares each strategy's deviation from
/// uniform abundance with its closed-form `phi`.
pub fn phi_vs_moran_report<T: Payoff>(g: &Game<T>, cfg: &MoranConfig) -> Result<PhiMoranReport> {
    Ok(compare_with_phi(g, cfg, moran_simulate(g, cfg)?))
}

/// Compares an existing Moran estimate for `g`, run with `cfg`, with `phi`.
pub fn compare_with_phi<T: Payoff>(g: &Game<T>, cfg: &MoranConfig, estimate: MoranEstimate) -> PhiMoranReport {
    let range = g.payoff_range().to_f64().unwrap_or(f64::INFINITY);
    let mut entries = Vec::new();
    let mut ordering = [true, true];
    for (slot, side) in [PlayerSide::Row, PlayerSide::Column].into_iter().enumerate() {
        let phi = phi_assessment(g, side);
        let phi = phi.to_f64();
        let k = phi.len() as f64;
        let abundance = estimate.abundance(side);
        let se = estimate.std_error(side);
        for s in 0..phi.len() {
            let deviation = abundance[s] - 1.0 / k;
            let resolved = deviation.abs() > SEPARATION * se[s];
            let sign_agrees = if phi[s] == 0.0 { !resolved } else { phi[s].signum() == deviation.signum() };
            let verdict = match (phi[s] == 0.0, resolved, sign_agrees) {
                (true, false, _) => Verdict::Neutral,
                (true, true, _) => Verdict::Disagrees,
                (false, false, _) => Verdict::Inconclusive,
                (false, true, true) => Verdict::Agrees,
                (false, true, false) => Verdict::Disagrees,
            };
            entries.push(PhiMoranEntry { side, strategy: s, phi: phi[s], deviation, std_error: se[s], sign_agrees, verdict });
        }
        let predicted = abundance_order(&Assessment::new(phi.clone(), side));
        let observed = abundance_order(&Assessment::new(abundance.to_vec(), side));
        // Every strict preference predicted by phi must hold in the simulation.
        ordering[slot] = (0..phi.len())
            .flat_map(|i| (0..phi.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| predicted.above(i, j))
            .all(|(i, j)| observed.above(i, j));
    }
    PhiMoranReport {
        entries,
        row_ordering_agrees: ordering[0],
        col_ordering_agrees: ordering[1],
        weak_selection_warning: cfg.delta * range > WEAK_SELECTION_LIMIT,
        unequal_population_warning: cfg.n_row != cfg.n_col,
        estimate,
    }
}
