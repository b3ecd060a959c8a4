//! Two-player normal-form games and mixed profiles.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Payoff, Real};

/// Which player an assessment or payoff vector refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlayerSide {
    Row,
    #[serde(alias = "col")]
    Column,
}

impl PlayerSide {
    pub fn opponent(self) -> Self {
        match self {
            PlayerSide::Row => PlayerSide::Column,
            PlayerSide::Column => PlayerSide::Row,
        }
    }
}

impl fmt::Display for PlayerSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlayerSide::Row => "row",
            PlayerSide::Column => "col",
        })
    }
}

impl std::str::FromStr for PlayerSide {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "row" | "R" | "r" => Ok(PlayerSide::Row),
            "col" | "column" | "C" | "c" => Ok(PlayerSide::Column),
            other => Err(Error::InvalidArgument(format!("unknown side {other:?}"))),
        }
    }
}

/// An `m x n` bimatrix game. Entry `(i, j)` holds the payoff pair
/// `(a_ij, b_ij)` when the row player picks `i` and the column player `j`.
///
/// Strategy labels are presentation only: equality compares dimensions and
/// payoffs, never labels.
#[derive(Debug, Clone)]
pub struct Game<T: Payoff = f64> {
    rows: usize,
    cols: usize,
    row_payoffs: Vec<T>,
    col_payoffs: Vec<T>,
    row_labels: Option<Vec<String>>,
    col_labels: Option<Vec<String>>,
}

impl<T: Payoff> PartialEq for Game<T> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.row_payoffs == other.row_payoffs
            && self.col_payoffs == other.col_payoffs
    }
}

impl<T: Payoff> Game<T> {
    /// Builds a game from nested row vectors, rejecting ragged or
    /// non-finite input.
    pub fn from_rows(row_payoffs: Vec<Vec<T>>, col_payoffs: Vec<Vec<T>>) -> Result<Self> {
        let rows = row_payoffs.len();
        if rows == 0 {
            return Err(Error::DimensionMismatch("game needs at least one row".into()));
        }
        if col_payoffs.len() != rows {
            return Err(Error::DimensionMismatch(format!(
                "row_payoffs has {rows} rows but col_payoffs has {}",
                col_payoffs.len()
            )));
        }
        let cols = row_payoffs[0].len();
        if cols == 0 {
            return Err(Error::DimensionMismatch("game needs at least one column".into()));
        }
        for (i, (a, b)) in row_payoffs.iter().zip(&col_payoffs).enumerate() {
            if a.len() != cols || b.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} / {} entries, expected {cols}",
                    a.len(),
                    b.len()
                )));
            }
        }
        let a: Vec<T> = row_payoffs.into_iter().flatten().collect();
        let b: Vec<T> = col_payoffs.into_iter().flatten().collect();
        Self::from_flat(rows, cols, a, b)
    }

    /// Builds a game from row-major payoff buffers.
    pub fn from_flat(rows: usize, cols: usize, row_payoffs: Vec<T>, col_payoffs: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!("empty game {rows}x{cols}")));
        }
        for buf in [&row_payoffs, &col_payoffs] {
            if buf.len() != rows * cols {
                return Err(Error::DimensionMismatch(format!(
                    "buffer of {} entries for a {rows}x{cols} game",
                    buf.len()
                )));
            }
        }
        for (k, (a, b)) in row_payoffs.iter().zip(&col_payoffs).enumerate() {
            if !a.is_finite_payoff() || !b.is_finite_payoff() {
                return Err(Error::NonFinite { row: k / cols, col: k % cols });
            }
        }
        Ok(Game { rows, cols, row_payoffs, col_payoffs, row_labels: None, col_labels: None })
    }

    /// Attaches strategy labels.
    pub fn with_labels<S: Into<String>>(
        mut self,
        row_labels: impl IntoIterator<Item = S>,
        col_labels: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let r: Vec<String> = row_labels.into_iter().map(Into::into).collect();
        let c: Vec<String> = col_labels.into_iter().map(Into::into).collect();
        if r.len() != self.rows {
            return Err(Error::LengthMismatch { expected: self.rows, got: r.len() });
        }
        if c.len() != self.cols {
            return Err(Error::LengthMismatch { expected: self.cols, got: c.len() });
        }
        self.row_labels = Some(r);
        self.col_labels = Some(c);
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn strategy_count(&self, side: PlayerSide) -> usize {
        match side {
            PlayerSide::Row => self.rows,
            PlayerSide::Column => self.cols,
        }
    }

    /// Row player's payoff `a_ij`.
    #[inline]
    pub fn a(&self, i: usize, j: usize) -> T {
        self.row_payoffs[i * self.cols + j]
    }

    /// Column player's payoff `b_ij`.
    #[inline]
    pub fn b(&self, i: usize, j: usize) -> T {
        self.col_payoffs[i * self.cols + j]
    }

    /// Payoff to `side` when it plays `own` and the opponent plays `other`.
    #[inline]
    pub fn payoff(&self, side: PlayerSide, own: usize, other: usize) -> T {
        match side {
            PlayerSide::Row => self.a(own, other),
            PlayerSide::Column => self.b(other, own),
        }
    }

    pub fn row_payoffs(&self) -> &[T] {
        &self.row_payoffs
    }

    pub fn col_payoffs(&self) -> &[T] {
        &self.col_payoffs
    }

    pub fn row_payoff_rows(&self) -> Vec<Vec<T>> {
        self.row_payoffs.chunks(self.cols).map(<[T]>::to_vec).collect()
    }

    pub fn col_payoff_rows(&self) -> Vec<Vec<T>> {
        self.col_payoffs.chunks(self.cols).map(<[T]>::to_vec).collect()
    }

    /// Column `j` as a list of `(a_ij, b_ij)` pairs over all rows.
    pub fn column(&self, j: usize) -> Vec<(T, T)> {
        (0..self.rows).map(|i| (self.a(i, j), self.b(i, j))).collect()
    }

    /// Label of strategy `k` of `side`; falls back to the 1-based index.
    pub fn label(&self, side: PlayerSide, k: usize) -> String {
        let labels = match side {
            PlayerSide::Row => &self.row_labels,
            PlayerSide::Column => &self.col_labels,
        };
        labels
            .as_ref()
            .and_then(|l| l.get(k).cloned())
            .unwrap_or_else(|| (k + 1).to_string())
    }

    pub fn labels(&self, side: PlayerSide) -> Option<&[String]> {
        match side {
            PlayerSide::Row => self.row_labels.as_deref(),
            PlayerSide::Column => self.col_labels.as_deref(),
        }
    }

    /// Rebuilds the game from a list of columns (payoff pairs per row) and
    /// their labels. Internal helper for the column-editing operations.
    pub(crate) fn from_columns(&self, columns: &[Vec<(T, T)>], col_labels: Option<Vec<String>>) -> Game<T> {
        let rows = self.rows;
        let cols = columns.len();
        let mut a = Vec::with_capacity(rows * cols);
        let mut b = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for col in columns {
                a.push(col[i].0);
                b.push(col[i].1);
            }
        }
        Game {
            rows,
            cols,
            row_payoffs: a,
            col_payoffs: b,
            row_labels: self.row_labels.clone(),
            col_labels,
        }
    }

    /// Applies `f` to the row player's payoff `a_ij`, keeping everything else.
    pub fn map_row_payoff(&self, i: usize, j: usize, f: impl FnOnce(T) -> T) -> Result<Game<T>> {
        if i >= self.rows {
            return Err(Error::IndexOutOfRange { index: i, len: self.rows });
        }
        if j >= self.cols {
            return Err(Error::IndexOutOfRange { index: j, len: self.cols });
        }
        let mut g = self.clone();
        let k = i * self.cols + j;
        g.row_payoffs[k] = f(g.row_payoffs[k]);
        if !g.row_payoffs[k].is_finite_payoff() {
            return Err(Error::NonFinite { row: i, col: j });
        }
        Ok(g)
    }

    /// Adds `scale * direction[i*n + j]` to every row payoff.
    pub fn shift_row_payoffs(&self, direction: &[T], scale: T) -> Result<Game<T>> {
        if direction.len() != self.row_payoffs.len() {
            return Err(Error::LengthMismatch { expected: self.row_payoffs.len(), got: direction.len() });
        }
        let mut g = self.clone();
        for (a, d) in g.row_payoffs.iter_mut().zip(direction) {
            *a = *a + scale * *d;
        }
        Ok(g)
    }

    /// Converts the payoff type, e.g. `Game<f64>` to `Game<f32>`.
    pub fn cast<U: Payoff>(&self) -> Result<Game<U>> {
        let conv = |x: &T| {
            x.to_f64()
                .and_then(U::from_f64)
                .ok_or_else(|| Error::InvalidArgument(format!("payoff {x} not representable")))
        };
        let a = self.row_payoffs.iter().map(conv).collect::<Result<Vec<_>>>()?;
        let b = self.col_payoffs.iter().map(conv).collect::<Result<Vec<_>>>()?;
        let mut g = Game::from_flat(self.rows, self.cols, a, b)?;
        g.row_labels = self.row_labels.clone();
        g.col_labels = self.col_labels.clone();
        Ok(g)
    }

    /// Smallest and largest payoff over both players.
    pub fn payoff_bounds(&self) -> (T, T) {
        let mut it = self.row_payoffs.iter().chain(&self.col_payoffs).copied();
        let first = it.next().expect("games are non-empty");
        it.fold((first, first), |(lo, hi), x| {
            (if x < lo { x } else { lo }, if x > hi { x } else { hi })
        })
    }

    pub fn payoff_range(&self) -> T {
        let (lo, hi) = self.payoff_bounds();
        hi - lo
    }

    /// Expected payoff of each pure strategy of `side` against the
    /// opponent's mixed strategy. Does not validate `opponent`.
    pub(crate) fn expected_payoffs_into(&self, opponent: &[T], side: PlayerSide, out: &mut [T]) {
        match side {
            PlayerSide::Row => {
                for (i, o) in out.iter_mut().enumerate() {
                    let row = &self.row_payoffs[i * self.cols..(i + 1) * self.cols];
                    *o = row.iter().zip(opponent).fold(T::zero(), |s, (&a, &q)| s + a * q);
                }
            }
            PlayerSide::Column => {
                out.iter_mut().for_each(|o| *o = T::zero());
                for (i, &p) in opponent.iter().enumerate() {
                    let row = &self.col_payoffs[i * self.cols..(i + 1) * self.cols];
                    for (o, &b) in out.iter_mut().zip(row) {
                        *o = *o + b * p;
                    }
                }
            }
        }
    }

    /// Pure-strategy Nash equilibria by exhaustive search.
    pub fn pure_nash_equilibria(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let row_best = (0..self.rows).all(|k| self.a(k, j) <= self.a(i, j));
                let col_best = (0..self.cols).all(|l| self.b(i, l) <= self.b(i, j));
                if row_best && col_best {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Expected payoffs `u_i = sum_j a_ij q_j` (row side) or
/// `u_j = sum_i b_ij p_i` (column side).
pub fn expected_payoffs<T: Payoff>(g: &Game<T>, opponent: &[T], side: PlayerSide) -> Result<Vec<T>> {
    let expected = g.strategy_count(side.opponent());
    if opponent.len() != expected {
        return Err(Error::LengthMismatch { expected, got: opponent.len() });
    }
    check_probability_vector(opponent)?;
    let mut out = vec![T::zero(); g.strategy_count(side)];
    g.expected_payoffs_into(opponent, side, &mut out);
    Ok(out)
}

/// Probability-vector tolerance used by input validation.
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;

fn check_probability_vector<T: Payoff>(v: &[T]) -> Result<()> {
    if v.iter().any(|&x| x < T::zero() || !x.is_finite_payoff()) {
        return Err(Error::InvalidArgument("probability vector has a negative entry".into()));
    }
    let sum = v.iter().fold(T::zero(), |s, &x| s + x);
    let dev = sum.to_f64().map(|s| (s - 1.0).abs()).unwrap_or(f64::INFINITY);
    // Summation of n floats accumulates up to ~n ulps.
    if dev > PROBABILITY_TOLERANCE * v.len().max(1) as f64 {
        return Err(Error::InvalidArgument(format!("probability vector sums to {sum}")));
    }
    Ok(())
}

/// A pair of mixed strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedProfile<T: Payoff = f64> {
    pub row: Vec<T>,
    pub col: Vec<T>,
}

impl<T: Payoff> MixedProfile<T> {
    /// Validates both vectors (non-negative, summing to one).
    pub fn new(row: Vec<T>, col: Vec<T>) -> Result<Self> {
        check_probability_vector(&row)?;
        check_probability_vector(&col)?;
        Ok(MixedProfile { row, col })
    }

    /// Uniform randomization on both sides.
    pub fn centroid(rows: usize, cols: usize) -> Self {
        let r = T::one() / T::from_count(rows);
        let c = T::one() / T::from_count(cols);
        MixedProfile { row: vec![r; rows], col: vec![c; cols] }
    }

    pub fn centroid_of(g: &Game<T>) -> Self {
        Self::centroid(g.rows(), g.cols())
    }

    pub fn side(&self, side: PlayerSide) -> &[T] {
        match side {
            PlayerSide::Row => &self.row,
            PlayerSide::Column => &self.col,
        }
    }

    pub fn fits(&self, g: &Game<T>) -> bool {
        self.row.len() == g.rows() && self.col.len() == g.cols()
    }

    /// Concatenation `(p_row, p_col)`.
    pub fn stacked(&self) -> Vec<T> {
        self.row.iter().chain(&self.col).copied().collect()
    }
}

impl<T: Real> MixedProfile<T> {
    /// Sup-norm distance between two profiles of equal shape.
    pub fn sup_distance(&self, other: &Self) -> T {
        self.row
            .iter()
            .zip(&other.row)
            .chain(self.col.iter().zip(&other.col))
            .fold(T::zero(), |m, (&x, &y)| m.max((x - y).abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::gen_coordination;

    #[test]
    fn ragged_input_is_rejected() {
        let err = Game::from_rows(vec![vec![1.0, 2.0], vec![1.0, 2.0, 3.0]], vec![vec![0.0, 0.0], vec![0.0, 0.0, 0.0]]);
        assert!(matches!(err, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn non_finite_is_rejected() {
        let err = Game::from_rows(vec![vec![1.0, f64::NAN]], vec![vec![0.0, 0.0]]);
        assert!(matches!(err, Err(Error::NonFinite { row: 0, col: 1 })));
    }

    #[test]
    fn expected_payoffs_coordination_uniform() {
        let g = gen_coordination(160.0f64, 1);
        let third = 1.0 / 3.0;
        let u = expected_payoffs(&g, &[third; 3], PlayerSide::Row).unwrap();
        assert!((u[0] - 250.0 / 3.0).abs() < 1e-12);
        assert!((u[1] - 60.0).abs() < 1e-12);
    }

    #[test]
    fn expected_payoffs_against_pure_strategy() {
        let g = gen_coordination(160.0, 1);
        for j in 0..3 {
            let mut e = vec![0.0; 3];
            e[j] = 1.0;
            let u = expected_payoffs(&g, &e, PlayerSide::Row).unwrap();
            for i in 0..2 {
                assert_eq!(u[i], g.a(i, j));
            }
        }
        let u = expected_payoffs(&g, &[0.0, 1.0], PlayerSide::Column).unwrap();
        assert_eq!(u, vec![0.0, 180.0, 40.0]);
    }

    #[test]
    fn zero_game_has_zero_payoffs() {
        let g = Game::from_rows(vec![vec![0.0; 3]; 2], vec![vec![0.0; 3]; 2]).unwrap();
        let u = expected_payoffs(&g, &[0.2, 0.3, 0.5], PlayerSide::Row).unwrap();
        assert_eq!(u, vec![0.0, 0.0]);
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let g = gen_coordination(160.0, 1);
        assert!(matches!(
            expected_payoffs(&g, &[0.5, 0.5], PlayerSide::Row),
            Err(Error::LengthMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn labels_do_not_affect_equality() {
        let g = gen_coordination(60.0, 1);
        let bare = Game::from_rows(g.row_payoff_rows(), g.col_payoff_rows()).unwrap();
        assert_eq!(g, bare);
        assert_eq!(g.label(PlayerSide::Row, 1), "H");
        assert_eq!(bare.label(PlayerSide::Row, 1), "2");
    }

    #[test]
    fn pure_nash_of_coordination() {
        let g = gen_coordination(160.0, 1);
        assert_eq!(g.pure_nash_equilibria(), vec![(0, 0), (1, 1)]);
    }
}
