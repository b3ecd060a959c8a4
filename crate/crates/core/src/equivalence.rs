//! Column duplication and the induced equivalence of games: two games are
//! equivalent when they have the same set of distinct columns.
//!
//! Column equality is exact. A tolerance would make the relation
//! intransitive; [`near_duplicate_columns`] exists for diagnostics only.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::game::Game;
use crate::scalar::Payoff;

/// Inserts `count` copies of column `j` immediately after it.
pub fn duplicate_column<T: Payoff>(g: &Game<T>, j: usize, count: usize) -> Result<Game<T>> {
    if j >= g.cols() {
        return Err(Error::IndexOutOfRange { index: j, len: g.cols() });
    }
    if count == 0 {
        return Err(Error::InvalidArgument("duplication count must be at least 1".into()));
    }
    let mut columns = Vec::with_capacity(g.cols() + count);
    let mut labels = g.labels(crate::PlayerSide::Column).map(|_| Vec::with_capacity(g.cols() + count));
    for l in 0..g.cols() {
        let copies = if l == j { count + 1 } else { 1 };
        let col = g.column(l);
        for k in 0..copies {
            columns.push(col.clone());
            if let Some(labels) = labels.as_mut() {
                labels.push(format!("{}{}", g.label(crate::PlayerSide::Column, l), "'".repeat(k)));
            }
        }
    }
    Ok(g.from_columns(&columns, labels))
}

/// Removes every column equal to an earlier one; first occurrences keep
/// their order.
pub fn reduce<T: Payoff>(g: &Game<T>) -> Game<T> {
    let keep = first_occurrences(g);
    select_columns(g, &keep)
}

/// Indices of the columns that do not repeat an earlier column.
pub fn first_occurrences<T: Payoff>(g: &Game<T>) -> Vec<usize> {
    let mut keep: Vec<usize> = Vec::new();
    for j in 0..g.cols() {
        if !keep.iter().any(|&k| columns_equal(g, k, g, j)) {
            keep.push(j);
        }
    }
    keep
}

/// Reduced game with distinct columns sorted lexicographically by
/// `(a_1j, b_1j, a_2j, b_2j, ...)`.
pub fn canonical_form<T: Payoff>(g: &Game<T>) -> Game<T> {
    let mut keep = first_occurrences(g);
    keep.sort_by(|&x, &y| compare_columns(g, x, y));
    select_columns(g, &keep)
}

/// Whether the two games have the same set of distinct columns.
pub fn equivalent<T: Payoff>(g1: &Game<T>, g2: &Game<T>) -> Result<bool> {
    if g1.rows() != g2.rows() {
        return Err(Error::RowCountMismatch(g1.rows(), g2.rows()));
    }
    Ok(canonical_form(g1) == canonical_form(g2))
}

/// Pairs of distinct columns `(j, l)`, `j < l`, whose payoff pairs all lie
/// within `threshold` of each other but are not exactly equal.
pub fn near_duplicate_columns<T: Payoff>(g: &Game<T>, threshold: T) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 0..g.cols() {
        for l in j + 1..g.cols() {
            if columns_equal(g, j, g, l) {
                continue;
            }
            let close = (0..g.rows()).all(|i| {
                g.a(i, j).abs_diff(g.a(i, l)) <= threshold && g.b(i, j).abs_diff(g.b(i, l)) <= threshold
            });
            if close {
                out.push((j, l));
            }
        }
    }
    out
}

fn columns_equal<T: Payoff>(g: &Game<T>, j: usize, h: &Game<T>, l: usize) -> bool {
    (0..g.rows()).all(|i| g.a(i, j) == h.a(i, l) && g.b(i, j) == h.b(i, l))
}

fn compare_columns<T: Payoff>(g: &Game<T>, x: usize, y: usize) -> Ordering {
    for i in 0..g.rows() {
        for (p, q) in [(g.a(i, x), g.a(i, y)), (g.b(i, x), g.b(i, y))] {
            match p.partial_cmp(&q).expect("payoffs are finite") {
                Ordering::Equal => continue,
                other => return other,
            }
        }
    }
    Ordering::Equal
}

fn select_columns<T: Payoff>(g: &Game<T>, keep: &[usize]) -> Game<T> {
    let columns: Vec<_> = keep.iter().map(|&j| g.column(j)).collect();
    let labels = g
        .labels(crate::PlayerSide::Column)
        .map(|_| keep.iter().map(|&j| g.label(crate::PlayerSide::Column, j)).collect());
    g.from_columns(&columns, labels)
}
