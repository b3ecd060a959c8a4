//! Strict dominance tests for one player's pure strategies.

use std::collections::BTreeSet;

use minilp::{ComparisonOp, OptimizationDirection, Problem};

use crate::error::{Error, Result};
use crate::game::{Game, PlayerSide};
use crate::scalar::Payoff;

/// Margin a dominating mixture must exceed against every opposing column.
pub const MIXED_DOMINANCE_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominanceMode {
    /// Dominated by another pure strategy.
    Pure,
    /// Dominated by some mixture of the other pure strategies.
    Mixed,
}

/// Indices of `side`'s strategies that are strictly dominated.
///
/// In `Mixed` mode every pure-dominated strategy is included, and the
/// remaining strategies are decided by maximizing the worst-case margin of a
/// mixture over the other strategies (a small linear program).
pub fn strictly_dominated<T: Payoff>(g: &Game<T>, side: PlayerSide, mode: DominanceMode) -> Result<BTreeSet<usize>> {
    let own = g.strategy_count(side);
    let other = g.strategy_count(side.opponent());
    let pay = |s: usize, o: usize| g.payoff(side, s, o);

    let mut out = BTreeSet::new();
    for i in 0..own {
        let pure = (0..own).any(|k| k != i && (0..other).all(|o| pay(k, o) > pay(i, o)));
        if pure {
            out.insert(i);
        }
    }
    if mode == DominanceMode::Pure || own < 2 {
        return Ok(out);
    }

    let payoff_f64 = |s: usize, o: usize| {
        pay(s, o)
            .to_f64()
            .ok_or_else(|| Error::InvalidArgument("payoff not representable as f64".into()))
    };
    for i in 0..own {
        if out.contains(&i) {
            continue;
        }
        if best_mixture_margin(own, other, i, &payoff_f64)? > MIXED_DOMINANCE_MARGIN {
            out.insert(i);
        }
    }
    Ok(out)
}

/// `max_x min_o sum_k x_k (P_ko - P_io)` over mixtures `x` on `k != target`.
fn best_mixture_margin(
    own: usize,
    other: usize,
    target: usize,
    payoff: &dyn Fn(usize, usize) -> Result<f64>,
) -> Result<f64> {
    let mut diffs = vec![vec![0.0; other]; own];
    let mut bound: f64 = 1.0;
    for k in 0..own {
        for o in 0..other {
            let d = payoff(k, o)? - payoff(target, o)?;
            bound = bound.max(d.abs() + 1.0);
            diffs[k][o] = d;
        }
    }

    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let margin = lp.add_var(1.0, (-bound, bound));
    let weights: Vec<_> = (0..own)
        .filter(|&k| k != target)
        .map(|k| (k, lp.add_var(0.0, (0.0, 1.0))))
        .collect();
    for o in 0..other {
        let mut row: Vec<_> = weights.iter().map(|&(k, v)| (v, diffs[k][o])).collect();
        row.push((margin, -1.0));
        lp.add_constraint(&row, ComparisonOp::Ge, 0.0);
    }
    let simplex: Vec<_> = weights.iter().map(|&(_, v)| (v, 1.0)).collect();
    lp.add_constraint(&simplex, ComparisonOp::Eq, 1.0);

    let solution = lp.solve().map_err(|e| Error::LinearProgram(e.to_string()))?;
    Ok(solution[margin])
}
