//! The four-matrix construction behind the impossibility argument, applied
//! numerically to a concrete assessor on a 2x2 game `M`:
//!
//! * `M1(t)`: `M` with `a_11 + t`;
//! * `M2(t)`: `M1(t)` with its first column tripled;
//! * `M3(t)`: `M2(0)` with `t` added to the third copy only;
//! * `M4(t)`: `M2(0)` with `t` added to the second and third copies.
//!
//! `M1(t) ~ M2(t)` and `M3(t) ~ M4(t)` for every `t`, so a duplication
//! invariant assessor must give `u1 = u2` and `u3 = u4`.

use crate::error::{Error, Result};
use crate::evolution::Assessment;
use crate::framing::assessor::Assessor;
use crate::framing::probe::derivative_probe;
use crate::game::{Game, PlayerSide};
use crate::scalar::{Payoff, Real};

/// `[M1(t), M2(t), M3(t), M4(t)]` for a 2x2 game.
pub fn proof_matrices<T: Payoff>(g: &Game<T>, t: T) -> Result<[Game<T>; 4]> {
    if g.rows() != 2 || g.cols() != 2 {
        return Err(Error::DimensionMismatch(format!("expected a 2x2 game, got {}x{}", g.rows(), g.cols())));
    }
    let first = g.column(0);
    let bumped: Vec<(T, T)> = first.iter().enumerate().map(|(i, &(a, b))| if i == 0 { (a + t, b) } else { (a, b) }).collect();
    let second = g.column(1);
    let build = |cols: Vec<Vec<(T, T)>>| g.from_columns(&cols, None);
    Ok([
        build(vec![bumped.clone(), second.clone()]),
        build(vec![bumped.clone(), bumped.clone(), bumped.clone(), second.clone()]),
        build(vec![first.clone(), first.clone(), bumped.clone(), second.clone()]),
        build(vec![first, bumped.clone(), bumped, second]),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremOptions<T> {
    /// The grid spans `[-t_range, t_range]`.
    pub t_range: T,
    pub grid_points: usize,
    /// Central-difference step for all derivatives.
    pub h: T,
    /// Two assessments closer than this (sup norm) count as equal.
    pub tolerance: T,
}

impl<T: Real> Default for TheoremOptions<T> {
    fn default() -> Self {
        TheoremOptions { t_range: T::one(), grid_points: 21, h: T::lit(1e-5), tolerance: T::lit(1e-12) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremRecord<T: Payoff> {
    pub grid: Vec<T>,
    /// `values[k][g] = f(M_{k+1}(grid[g]))`.
    pub values: [Vec<Assessment<T>>; 4],
    /// `max_t ||u1(t) - u2(t)||_inf` over the grid.
    pub gap_12: T,
    pub gap_34: T,
    pub invariant_12: bool,
    pub invariant_34: bool,
    /// `u1(0) = u2(0)` within tolerance.
    pub equal_at_zero: bool,
    /// `u_k'(0)` by central differences.
    pub derivatives: [Vec<T>; 4],
    /// `d f / d a_1c` at `M2(0)` for the three copies `c = 1, 2, 3`.
    pub partials_at_m2: [Vec<T>; 3],
    /// `|u2'(0) - sum_c d f / d a_1c (M2(0))|`, a chain-rule consistency check
    /// on the probes themselves (small for any smooth assessor).
    pub chain_rule_gap: T,
}

impl<T: Payoff> TheoremRecord<T> {
    /// Both duplication-invariance checks passed on the grid.
    pub fn non_manipulable_on_grid(&self) -> bool {
        self.invariant_12 && self.invariant_34
    }
}

/// Evaluates `assessor` on the four proof matrices over a grid of `t` and
/// records whether the equivalent pairs agree, together with the
/// derivatives at `t = 0`.
pub fn theorem_enactment<T: Real, A: Assessor<T> + ?Sized>(assessor: &A, g: &Game<T>, opts: &TheoremOptions<T>) -> Result<TheoremRecord<T>> {
    if !(opts.t_range >= T::zero()) || opts.grid_points < 2 {
        return Err(Error::InvalidArgument("need t_range >= 0 and at least 2 grid points".into()));
    }
    if !(opts.h > T::zero()) {
        return Err(Error::InvalidArgument("derivative step must be positive".into()));
    }
    let last = T::from_count(opts.grid_points - 1);
    let grid: Vec<T> = (0..opts.grid_points)
        .map(|k| -opts.t_range + (opts.t_range + opts.t_range) * T::from_count(k) / last)
        .collect();

    let f = |m: &Game<T>| assessor.assess(m, PlayerSide::Row);
    let mut values: [Vec<Assessment<T>>; 4] = Default::default();
    for &t in &grid {
        let ms = proof_matrices(g, t)?;
        for (k, m) in ms.iter().enumerate() {
            values[k].push(f(m)?);
        }
    }
    let gap = |x: usize, y: usize| {
        values[x]
            .iter()
            .zip(&values[y])
            .fold(T::zero(), |acc, (p, q)| acc.max(p.sup_distance(q)))
    };
    let (gap_12, gap_34) = (gap(0, 1), gap(2, 3));

    let at_zero = proof_matrices(g, T::zero())?;
    let equal_at_zero = f(&at_zero[0])?.sup_distance(&f(&at_zero[1])?) <= opts.tolerance;

    let plus = proof_matrices(g, opts.h)?;
    let minus = proof_matrices(g, -opts.h)?;
    let two_h = opts.h + opts.h;
    let mut derivatives: [Vec<T>; 4] = Default::default();
    for k in 0..4 {
        let (fu, fd) = (f(&plus[k])?, f(&minus[k])?);
        derivatives[k] = fu.values.iter().zip(&fd.values).map(|(&u, &d)| (u - d) / two_h).collect();
    }

    let m2 = &at_zero[1];
    let partials_at_m2 = [
        derivative_probe(assessor, m2, 0, 0, opts.h)?,
        derivative_probe(assessor, m2, 0, 1, opts.h)?,
        derivative_probe(assessor, m2, 0, 2, opts.h)?,
    ];
    let chain_rule_gap = (0..g.rows()).fold(T::zero(), |acc, s| {
        let sum = partials_at_m2[0][s] + partials_at_m2[1][s] + partials_at_m2[2][s];
        acc.max((derivatives[1][s] - sum).abs())
    });

    Ok(TheoremRecord {
        grid,
        values,
        gap_12,
        gap_34,
        invariant_12: gap_12 <= opts.tolerance,
        invariant_34: gap_34 <= opts.tolerance,
        equal_at_zero,
        derivatives,
        partials_at_m2,
        chain_rule_gap,
    })
}
