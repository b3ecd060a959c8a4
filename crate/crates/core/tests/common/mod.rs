#![allow(dead_code)]

use framing_core::Game;
use proptest::prelude::*;

/// Games up to `max_rows x max_cols` with small integer payoffs, so that
/// equal columns appear often enough to exercise reduction.
pub fn small_int_game(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Game<f64>> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(m, n)| {
        (prop::collection::vec(-3i32..=3, m * n), prop::collection::vec(-3i32..=3, m * n)).prop_map(move |(a, b)| {
            let f = |v: Vec<i32>| v.into_iter().map(f64::from).collect();
            Game::from_flat(m, n, f(a), f(b)).unwrap()
        })
    })
}

/// Games with continuous payoffs in `[-range, range]`.
pub fn real_game(rows: std::ops::RangeInclusive<usize>, cols: std::ops::RangeInclusive<usize>, range: f64) -> impl Strategy<Value = Game<f64>> {
    (rows, cols).prop_flat_map(move |(m, n)| {
        (prop::collection::vec(-range..=range, m * n), prop::collection::vec(-range..=range, m * n))
            .prop_map(move |(a, b)| Game::from_flat(m, n, a, b).unwrap())
    })
}

/// A probability vector of length `k`.
pub fn simplex(k: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, k).prop_map(|w| {
        let s: f64 = w.iter().sum();
        w.into_iter().map(|x| x / s).collect()
    })
}

/// Rebuilds `g` with its columns in the order `perm`.
pub fn permute_columns(g: &Game<f64>, perm: &[usize]) -> Game<f64> {
    let (m, n) = (g.rows(), g.cols());
    let mut a = Vec::with_capacity(m * n);
    let mut b = Vec::with_capacity(m * n);
    for i in 0..m {
        for &j in perm {
            a.push(g.a(i, j));
            b.push(g.b(i, j));
        }
    }
    Game::from_flat(m, n, a, b).unwrap()
}

/// Independent softmax used as a test oracle.
pub fn softmax(u: &[f64], lambda: f64) -> Vec<f64> {
    let top = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = u.iter().map(|&x| (lambda * (x - top)).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

/// `max |p - softmax(lambda u(p))|` computed without the library.
pub fn oracle_residual(g: &Game<f64>, lambda: f64, row: &[f64], col: &[f64]) -> f64 {
    let (m, n) = (g.rows(), g.cols());
    let ur: Vec<f64> = (0..m).map(|i| (0..n).map(|j| g.a(i, j) * col[j]).sum()).collect();
    let uc: Vec<f64> = (0..n).map(|j| (0..m).map(|i| g.b(i, j) * row[i]).sum()).collect();
    let sr = softmax(&ur, lambda);
    let sc = softmax(&uc, lambda);
    row.iter().zip(&sr).chain(col.iter().zip(&sc)).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `phi` for the row player straight from the definition.
pub fn phi_oracle(g: &Game<f64>) -> Vec<f64> {
    let (m, n) = (g.rows(), g.cols());
    let means: Vec<f64> = (0..m).map(|i| (0..n).map(|j| g.a(i, j)).sum::<f64>() / n as f64).collect();
    let grand = means.iter().sum::<f64>() / m as f64;
    means.iter().map(|x| x - grand).collect()
}
