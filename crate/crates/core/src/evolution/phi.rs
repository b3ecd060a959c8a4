use serde::Serialize;

use crate::game::{Game, PlayerSide};
use crate::scalar::Payoff;

/// A real vector over one player's pure strategies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assessment<T: Payoff = f64> {
    pub values: Vec<T>,
    pub side: PlayerSide,
}

impl<T: Payoff> Assessment<T> {
    pub fn new(values: Vec<T>, side: PlayerSide) -> Self {
        Assessment { values, side }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sup-norm distance to another assessment of the same length.
    pub fn sup_distance(&self, other: &Self) -> T {
        self.values
            .iter()
            .zip(&other.values)
            .fold(T::zero(), |m, (&x, &y)| {
                let d = x.abs_diff(y);
                if d > m {
                    d
                } else {
                    m
                }
            })
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

/// Weak-selection deviation `phi_i = mean_j a_ij - mean_ij a_ij` for the
/// row player (or the same on `b` transposed for the column player).
///
/// The grand mean is taken as the mean of the strategy means, which is the
/// same quantity because every strategy has the same number of entries.
pub fn phi_assessment<T: Payoff>(g: &Game<T>, side: PlayerSide) -> Assessment<T> {
    let own = g.strategy_count(side);
    let other = g.strategy_count(side.opponent());
    let other_count = T::from_count(other);
    let means: Vec<T> = (0..own)
        .map(|s| (0..other).fold(T::zero(), |acc, o| acc + g.payoff(side, s, o)) / other_count)
        .collect();
    let grand = means.iter().fold(T::zero(), |acc, &x| acc + x) / T::from_count(own);
    Assessment::new(means.into_iter().map(|x| x - grand).collect(), side)
}

/// `true` exactly where the assessment is strictly positive.
pub fn selection_favors<T: Payoff>(a: &Assessment<T>) -> Vec<bool> {
    a.values.iter().map(|&x| x > T::zero()).collect()
}

/// Strategies grouped into tiers of equal value, best tier first. Within a
/// tier, indices keep their original order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ranking {
    pub tiers: Vec<Vec<usize>>,
}

impl Ranking {
    /// Flattened descending order.
    pub fn order(&self) -> Vec<usize> {
        self.tiers.iter().flatten().copied().collect()
    }

    pub fn has_ties(&self) -> bool {
        self.tiers.iter().any(|t| t.len() > 1)
    }

    /// Pairs of strategies that compare equal.
    pub fn ties(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for tier in &self.tiers {
            for (k, &i) in tier.iter().enumerate() {
                for &j in &tier[k + 1..] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Whether strategy `i` is ranked strictly above `j`.
    pub fn above(&self, i: usize, j: usize) -> bool {
        let tier_of = |s: usize| self.tiers.iter().position(|t| t.contains(&s));
        matches!((tier_of(i), tier_of(j)), (Some(a), Some(b)) if a < b)
    }
}

/// Strategies sorted by assessment value, descending; equal values tie.
pub fn abundance_order<T: Payoff>(a: &Assessment<T>) -> Ranking {
    let mut idx: Vec<usize> = (0..a.values.len()).collect();
    idx.sort_by(|&i, &j| {
        a.values[j]
            .partial_cmp(&a.values[i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut tiers: Vec<Vec<usize>> = Vec::new();
    for i in idx {
        match tiers.last_mut() {
            Some(t) if a.values[t[0]] == a.values[i] => t.push(i),
            _ => tiers.push(vec![i]),
        }
    }
    Ranking { tiers }
}
