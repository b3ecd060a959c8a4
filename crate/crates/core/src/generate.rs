//! Game generators: the coordination game with outside options and the
//! traveler's dilemma.

use crate::error::{Error, Result};
use crate::game::Game;
use crate::scalar::Payoff;

const LOW: f64 = 90.0;
const HIGH: f64 = 180.0;
const SAFE: f64 = 40.0;

fn outside_labels(count: usize) -> Vec<String> {
    match count {
        1 => vec!["S".to_string()],
        _ => (1..=count).map(|k| format!("S{k}")).collect(),
    }
}

/// Coordination game with rows `L, H` and columns `L, H` followed by
/// `n_outside` identical outside options. Coordinating pays 90 (low) or
/// 180 (high); the outside option pays the column player 40 and the row
/// player `x` (if playing `L`) or 0 (if playing `H`).
pub fn gen_coordination<T: Payoff>(x: T, n_outside: usize) -> Game<T> {
    coordination_with(vec![x; n_outside])
}

/// The four-column variant whose two outside options differ by `eps` in
/// the row-`L` payoff: `S1` pays `x`, `S2` pays `x + eps`.
pub fn gen_coordination_eps<T: Payoff>(x: T, eps: T) -> Game<T> {
    coordination_with(vec![x, x + eps])
}

fn coordination_with<T: Payoff>(outside: Vec<T>) -> Game<T> {
    let (lo, hi, safe) = (T::lit(LOW), T::lit(HIGH), T::lit(SAFE));
    let zero = T::zero();
    let mut a = vec![vec![lo, zero], vec![zero, hi]];
    let mut b = vec![vec![lo, zero], vec![zero, hi]];
    for &x in &outside {
        a[0].push(x);
        a[1].push(zero);
        b[0].push(safe);
        b[1].push(safe);
    }
    let mut cols = vec!["L".to_string(), "H".to_string()];
    cols.extend(outside_labels(outside.len()));
    Game::from_rows(a, b)
        .and_then(|g| g.with_labels(["L".to_string(), "H".to_string()], cols))
        .expect("coordination game is well formed")
}

/// Traveler's dilemma over integer claims `lo..=hi`. Both claimants are
/// paid the lower claim; the lower claimant gets `reward` on top and the
/// higher one pays `reward`.
pub fn gen_travelers<T: Payoff>(lo: i64, hi: i64, reward: T) -> Result<Game<T>> {
    if lo > hi {
        return Err(Error::InvalidArgument(format!("claim range {lo}..={hi} is empty")));
    }
    if reward <= T::zero() {
        return Err(Error::InvalidArgument("reward must be positive".into()));
    }
    let claim = |c: i64| T::from_i64(c).expect("claim representable");
    let pay = |own: i64, other: i64| {
        let base = claim(own.min(other));
        match own.cmp(&other) {
            std::cmp::Ordering::Less => base + reward,
            std::cmp::Ordering::Greater => base - reward,
            std::cmp::Ordering::Equal => base,
        }
    };
    let claims: Vec<i64> = (lo..=hi).collect();
    let a: Vec<Vec<T>> = claims.iter().map(|&r| claims.iter().map(|&c| pay(r, c)).collect()).collect();
    let b: Vec<Vec<T>> = claims.iter().map(|&r| claims.iter().map(|&c| pay(c, r)).collect()).collect();
    let labels: Vec<String> = claims.iter().map(i64::to_string).collect();
    Game::from_rows(a, b)?.with_labels(labels.clone(), labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::PlayerSide;

    #[test]
    fn one_outside_option_matrix() {
        let g = gen_coordination(160.0, 1);
        assert_eq!((g.rows(), g.cols()), (2, 3));
        assert_eq!(g.row_payoff_rows(), vec![vec![90.0, 0.0, 160.0], vec![0.0, 180.0, 0.0]]);
        assert_eq!(g.col_payoff_rows(), vec![vec![90.0, 0.0, 40.0], vec![0.0, 180.0, 40.0]]);
        assert_eq!(g.label(PlayerSide::Column, 2), "S");
    }

    #[test]
    fn two_outside_options_matrix() {
        let g = gen_coordination(60.0, 2);
        assert_eq!(g.row_payoff_rows(), vec![vec![90.0, 0.0, 60.0, 60.0], vec![0.0, 180.0, 0.0, 0.0]]);
        assert_eq!(g.col_payoff_rows()[1], vec![0.0, 180.0, 40.0, 40.0]);
    }

    #[test]
    fn bare_coordination() {
        let g = gen_coordination(0.0, 0);
        assert_eq!((g.rows(), g.cols()), (2, 2));
    }

    #[test]
    fn eps_variant() {
        assert_eq!(gen_coordination_eps(60.0, 0.0), gen_coordination(60.0, 2));
        let g = gen_coordination_eps(60.0, 1.0);
        assert_eq!(g.column(2), vec![(60.0, 40.0), (0.0, 40.0)]);
        assert_eq!(g.column(3), vec![(61.0, 40.0), (0.0, 40.0)]);
    }

    #[test]
    fn travelers_dilemma_shape_and_entries() {
        let g = gen_travelers(180, 300, 5.0).unwrap();
        assert_eq!((g.rows(), g.cols()), (121, 121));
        for k in 0..121 {
            let c = 180.0 + k as f64;
            assert_eq!((g.a(k, k), g.b(k, k)), (c, c));
        }
        assert_eq!((g.a(0, 120), g.b(0, 120)), (185.0, 175.0));
        assert_eq!((g.a(120, 0), g.b(120, 0)), (175.0, 185.0));
    }

    #[test]
    fn travelers_single_claim() {
        let g = gen_travelers(200, 200, 5.0).unwrap();
        assert_eq!((g.rows(), g.cols(), g.a(0, 0), g.b(0, 0)), (1, 1, 200.0, 200.0));
    }

    #[test]
    fn travelers_rejects_empty_range() {
        assert!(gen_travelers::<f64>(3, 2, 5.0).is_err());
        assert!(gen_travelers::<f64>(2, 3, 0.0).is_err());
    }
}
