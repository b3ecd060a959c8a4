use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::equivalence::{canonical_form, duplicate_column, reduce};
use crate::error::{Error, Result};
use crate::evolution::Assessment;
use crate::framing::assessor::Assessor;
use crate::game::{Game, PlayerSide};
use crate::io::game_json;
use crate::scalar::Payoff;

/// Representations never exceed this many columns; the equivalence class
/// itself is infinite.
pub const MAX_REPRESENTATION_COLUMNS: usize = 12;

/// Discrepancy (in assessment units) above which a report is flagged
/// inconsistent even without an order flip. Absorbs rounding in sums over
/// duplicated columns.
pub const CONSISTENCY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Representation<T: Payoff> {
    /// Extra copies of each column of the reduced base game.
    pub duplications: Vec<usize>,
    pub game: Game<T>,
    pub assessment: Assessment<T>,
}

/// How one assessor's row-player output varies across equivalent
/// representations of a game.
#[derive(Debug, Clone, PartialEq)]
pub struct FramingReport<T: Payoff> {
    pub assessor: String,
    pub base_game: Game<T>,
    pub representations: Vec<Representation<T>>,
    /// Largest sup-norm distance between any two assessments.
    pub max_discrepancy: T,
    /// Pairs `(i, k)`, `i < k`, ranked `i` above `k` in one representation
    /// and `k` above `i` in another.
    pub order_flips: Vec<(usize, usize)>,
    /// Whether all representations share the same pure Nash equilibria
    /// (columns identified by content).
    pub pure_nash_consistent: bool,
}

impl<T: Payoff> FramingReport<T> {
    pub fn inconsistent(&self) -> bool {
        !self.order_flips.is_empty() || self.max_discrepancy.to_f64().unwrap_or(f64::INFINITY) > CONSISTENCY_TOLERANCE
    }

    pub fn has_flip(&self, i: usize, k: usize) -> bool {
        self.order_flips.contains(&(i.min(k), i.max(k)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let label = |s: usize| self.base_game.label(PlayerSide::Row, s);
        serde_json::json!({
            "assessor": self.assessor,
            "side": PlayerSide::Row,
            "base_game": game_json(&self.base_game),
            "representations": self.representations.iter().map(|r| serde_json::json!({
                "duplications": r.duplications,
                "game": game_json(&r.game),
                "assessment": r.assessment.to_f64(),
            })).collect::<Vec<_>>(),
            "max_discrepancy": self.max_discrepancy.to_f64(),
            "order_flips": self.order_flips.iter().map(|&(i, k)| serde_json::json!([label(i), label(k)])).collect::<Vec<_>>(),
            "order_flip_indices": self.order_flips,
            "pure_nash_consistent": self.pure_nash_consistent,
            "inconsistent": self.inconsistent(),
        })
    }

    /// Plain-text table: one line per representation.
    pub fn render_table(&self) -> String {
        let g = &self.base_game;
        let mut out = String::new();
        let _ = writeln!(out, "assessor: {}", self.assessor);
        let _ = write!(out, "{:<24}", "duplications");
        for s in 0..g.rows() {
            let _ = write!(out, " {:>14}", g.label(PlayerSide::Row, s));
        }
        out.push('\n');
        for r in &self.representations {
            let _ = write!(out, "{:<24}", format!("{:?}", r.duplications));
            for v in r.assessment.to_f64() {
                let _ = write!(out, " {v:>14.6}");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "max discrepancy: {}", self.max_discrepancy);
        let flips: Vec<String> = self
            .order_flips
            .iter()
            .map(|&(i, k)| format!("({},{})", g.label(PlayerSide::Row, i), g.label(PlayerSide::Row, k)))
            .collect();
        let _ = writeln!(out, "order flips: {}", if flips.is_empty() { "none".to_string() } else { flips.join(" ") });
        let _ = writeln!(out, "inconsistent: {}", self.inconsistent());
        out
    }
}

/// Every game obtained from `reduce(g)` by inserting between 0 and
/// `max_dups` copies after each column, capped at
/// [`MAX_REPRESENTATION_COLUMNS`] columns. The unduplicated base comes first.
pub fn enumerate_representations<T: Payoff>(g: &Game<T>, max_dups: usize) -> Vec<(Vec<usize>, Game<T>)> {
    let base = reduce(g);
    let k = base.cols();
    let mut out = vec![(vec![0; k], base.clone())];
    if max_dups == 0 {
        return out;
    }
    let mut counts = vec![0usize; k];
    loop {
        // Odometer over counts in {0..=max_dups}^k, last column fastest.
        let mut pos = k;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if counts[pos] < max_dups {
                counts[pos] += 1;
                counts[pos + 1..].iter_mut().for_each(|c| *c = 0);
                break;
            }
        }
        if k + counts.iter().sum::<usize>() > MAX_REPRESENTATION_COLUMNS {
            continue;
        }
        let mut game = base.clone();
        // Insert from the right so earlier column indices stay valid.
        for j in (0..k).rev() {
            if counts[j] > 0 {
                game = duplicate_column(&game, j, counts[j]).expect("index within reduced game");
            }
        }
        out.push((counts.clone(), game));
    }
}

/// Evaluates `assessor` for the row player on every representation from
/// [`enumerate_representations`] and collects discrepancies and order flips.
pub fn frame_sensitivity<T: Payoff, A: Assessor<T> + ?Sized>(
    assessor: &A,
    g: &Game<T>,
    max_dups: usize,
) -> Result<FramingReport<T>> {
    let base = reduce(g);
    let candidates = enumerate_representations(g, max_dups);
    let assessed = assess_all(assessor, &candidates);
    let mut representations = Vec::with_capacity(candidates.len());
    for (index, ((duplications, game), assessment)) in candidates.into_iter().zip(assessed).enumerate() {
        let assessment = assessment.map_err(|e| Error::Representation {
            index,
            duplications: duplications.clone(),
            source: Box::new(e),
        })?;
        if assessment.len() != g.rows() {
            return Err(Error::LengthMismatch { expected: g.rows(), got: assessment.len() });
        }
        representations.push(Representation { duplications, game, assessment });
    }

    let mut max_discrepancy = T::zero();
    for (x, r) in representations.iter().enumerate() {
        for s in &representations[x + 1..] {
            let d = r.assessment.sup_distance(&s.assessment);
            if d > max_discrepancy {
                max_discrepancy = d;
            }
        }
    }

    let mut order_flips = Vec::new();
    for i in 0..g.rows() {
        for k in i + 1..g.rows() {
            let above = representations.iter().any(|r| r.assessment.values[i] > r.assessment.values[k]);
            let below = representations.iter().any(|r| r.assessment.values[i] < r.assessment.values[k]);
            if above && below {
                order_flips.push((i, k));
            }
        }
    }

    let nash_sets: Vec<BTreeSet<(usize, usize)>> = representations.iter().map(|r| nash_by_content(&base, &r.game)).collect();
    let pure_nash_consistent = nash_sets.windows(2).all(|w| w[0] == w[1]);

    Ok(FramingReport {
        assessor: assessor.name().to_string(),
        base_game: base,
        representations,
        max_discrepancy,
        order_flips,
        pure_nash_consistent,
    })
}

/// Row assessments of every candidate, in order, spread over the available
/// cores.
fn assess_all<T: Payoff, A: Assessor<T> + ?Sized>(assessor: &A, candidates: &[(Vec<usize>, Game<T>)]) -> Vec<Result<Assessment<T>>> {
    let workers = std::thread::available_parallelism().map_or(1, usize::from).min(candidates.len()).max(1);
    let chunk = candidates.len().div_ceil(workers).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = candidates
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(|(_, game)| assessor.assess(game, PlayerSide::Row)).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("assessor panicked")).collect()
    })
}

/// Pure equilibria of `g` as `(row, index of the column in the canonical form
/// of base)`.
fn nash_by_content<T: Payoff>(base: &Game<T>, g: &Game<T>) -> BTreeSet<(usize, usize)> {
    let canonical = canonical_form(base);
    let id = |j: usize| {
        let col = g.column(j);
        (0..canonical.cols()).find(|&c| canonical.column(c) == col).unwrap_or(usize::MAX)
    };
    g.pure_nash_equilibria().into_iter().map(|(i, j)| (i, id(j))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::equivalent;
    use crate::framing::assessor::{NashArgmax, PhiAssessor};
    use crate::generate::gen_coordination;

    #[test]
    fn enumeration_counts() {
        let g = gen_coordination(60.0, 1);
        assert_eq!(enumerate_representations(&g, 0).len(), 1);
        assert_eq!(enumerate_representations(&g, 1).len(), 8);
        assert_eq!(enumerate_representations(&g, 2).len(), 27);
        for (_, rep) in enumerate_representations(&g, 2) {
            assert!(equivalent(&rep, &g).unwrap());
        }
    }

    #[test]
    fn enumeration_respects_the_column_cap() {
        let g = gen_coordination(60.0, 1);
        let reps = enumerate_representations(&g, 9);
        assert!(reps.iter().all(|(_, r)| r.cols() <= MAX_REPRESENTATION_COLUMNS));
        // counts summing to at most 9 over 3 columns, each <= 9: C(12, 3).
        assert_eq!(reps.len(), 220);
    }

    #[test]
    fn phi_flips_l_and_h() {
        let report = frame_sensitivity(&PhiAssessor, &gen_coordination(60.0, 1), 1).unwrap();
        assert_eq!(report.order_flips, vec![(0, 1)]);
        let has_pair = report.representations.iter().any(|r| r.assessment.values == vec![3.75, -3.75]);
        assert!(has_pair);
        assert!(report.max_discrepancy >= 8.75);
        assert!(report.inconsistent());
        assert!(report.pure_nash_consistent);
    }

    #[test]
    fn nash_reference_is_consistent() {
        let report = frame_sensitivity(&NashArgmax, &gen_coordination(60.0, 1), 1).unwrap();
        assert!(report.order_flips.is_empty());
        assert_eq!(report.max_discrepancy, 0.0);
        assert!(!report.inconsistent());
    }

    #[test]
    fn single_column_game_is_framing_free_for_phi() {
        let g = Game::from_rows(vec![vec![3.0], vec![-2.0], vec![7.0]], vec![vec![1.0], vec![0.0], vec![5.0]]).unwrap();
        for dups in [1, 4, 11] {
            let report = frame_sensitivity(&PhiAssessor, &g, dups).unwrap();
            assert_eq!(report.max_discrepancy, 0.0);
        }
    }

    #[test]
    fn zero_dups_is_trivially_consistent() {
        let report = frame_sensitivity(&PhiAssessor, &gen_coordination(60.0, 2), 0).unwrap();
        assert_eq!(report.representations.len(), 1);
        assert_eq!(report.max_discrepancy, 0.0);
        assert!(!report.inconsistent());
    }

    #[test]
    fn json_and_table_mention_the_flip() {
        let report = frame_sensitivity(&PhiAssessor, &gen_coordination(60.0, 1), 1).unwrap();
        let json = report.to_json();
        assert_eq!(json["order_flips"][0], serde_json::json!(["L", "H"]));
        assert_eq!(json["inconsistent"], serde_json::json!(true));
        assert_eq!(json["representations"].as_array().unwrap().len(), 8);
        assert!(report.render_table().contains("order flips: (L,H)"));
    }
}
