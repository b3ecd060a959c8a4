use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::game::{Game, MixedProfile, PlayerSide};
use crate::io::fmt_f64;
use crate::qre::response::LogitParams;
use crate::qre::solver::{logit_tangent, newton_corrector, predict, solve_fixed_point, SolverSettings};
use crate::scalar::Real;

/// Default `lambda_max` is `LAMBDA_RANGE_PRODUCT / payoff range`, which puts
/// the branch well past its last bend for payoffs of any scale.
pub const LAMBDA_RANGE_PRODUCT: f64 = 50.0;

/// Step control for [`trace_branch`]. Step sizes are fractions of
/// `lambda_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchOptions<T> {
    pub initial_step_fraction: T,
    pub max_step_fraction: T,
    /// Giving up below this step size truncates the trace.
    pub min_step_fraction: T,
    /// The step doubles after a corrector solve with fewer iterations.
    pub easy_iterations: usize,
    /// The step halves after a corrector solve with at least this many.
    pub hard_iterations: usize,
    /// Largest sup-norm move accepted between consecutive samples.
    pub jump_threshold: T,
    /// Stop once every probability is within `1 - purity` of 0 or 1.
    /// `None` traces all the way to `lambda_max`.
    pub purity_threshold: Option<T>,
    /// The corrector stops unless each Newton update is at most this
    /// fraction of the previous one.
    pub contraction: T,
    /// Largest sup-norm move of the tangent predictor, and of the corrector
    /// away from the prediction. Steps shrink where the branch is steep.
    pub max_move: T,
    /// Tolerance and iteration cap of the corrector.
    pub solver: SolverSettings<T>,
}

impl<T: Real> Default for BranchOptions<T> {
    fn default() -> Self {
        BranchOptions {
            initial_step_fraction: T::lit(1e-3),
            max_step_fraction: T::lit(0.05),
            min_step_fraction: T::lit(1e-12),
            easy_iterations: 10,
            hard_iterations: 100,
            jump_threshold: T::lit(0.2),
            purity_threshold: Some(T::lit(0.99)),
            contraction: T::lit(0.5),
            max_move: T::lit(0.02),
            solver: SolverSettings::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchSample<T: Real> {
    pub lambda: T,
    pub profile: MixedProfile<T>,
    pub residual: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    /// Reached the requested `lambda_max`.
    LambdaMax,
    /// The profile came within the purity threshold of a vertex.
    Pure,
    /// The corrector failed even at the smallest step; the trace stops at
    /// the last accepted sample.
    CorrectorFailed,
}

/// Accepted samples along the principal branch, in increasing `lambda`.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchTrace<T: Real> {
    pub samples: Vec<BranchSample<T>>,
    pub termination: Termination,
    pub lambda_max: T,
}

impl<T: Real> BranchTrace<T> {
    pub fn terminal(&self) -> &BranchSample<T> {
        self.samples.last().expect("a trace always holds the centroid sample")
    }

    pub fn terminal_profile(&self) -> &MixedProfile<T> {
        &self.terminal().profile
    }

    pub fn terminal_lambda(&self) -> T {
        self.terminal().lambda
    }

    pub fn is_complete(&self) -> bool {
        self.termination != Termination::CorrectorFailed
    }

    /// CSV with header `lambda,pR_1..pR_m,pC_1..pC_n,residual`.
    pub fn to_csv(&self) -> String {
        let first = &self.samples[0].profile;
        let mut out = String::from("lambda");
        for i in 1..=first.row.len() {
            let _ = write!(out, ",pR_{i}");
        }
        for j in 1..=first.col.len() {
            let _ = write!(out, ",pC_{j}");
        }
        out.push_str(",residual\n");
        let f = |x: T| fmt_f64(x.to_f64().unwrap_or(f64::NAN));
        for s in &self.samples {
            out.push_str(&f(s.lambda));
            for &x in s.profile.row.iter().chain(&s.profile.col) {
                out.push(',');
                out.push_str(&f(x));
            }
            out.push(',');
            out.push_str(&f(s.residual));
            out.push('\n');
        }
        out
    }
}

/// `LAMBDA_RANGE_PRODUCT / (max payoff - min payoff)` over both players,
/// or `LAMBDA_RANGE_PRODUCT` itself for a constant game.
pub fn default_lambda_max<T: Real>(g: &Game<T>) -> T {
    let range = g.payoff_range();
    let product = T::lit(LAMBDA_RANGE_PRODUCT);
    if range > T::zero() {
        product / range
    } else {
        product
    }
}

fn is_pure<T: Real>(p: &MixedProfile<T>, purity: T) -> bool {
    let low = T::one() - purity;
    p.row.iter().chain(&p.col).all(|&x| x >= purity || x <= low)
}

/// Follows the logit equilibrium branch that starts at the centroid for
/// `lambda = 0`.
///
/// Each step predicts along the tangent of the branch and corrects with
/// Newton iterations that must contract, which keeps the corrector on the
/// branch being followed. A step is rejected and halved when the corrector
/// fails or the profile moves more than `jump_threshold`; it doubles after
/// easy solves (up to `max_step_fraction * lambda_max`) and halves after
/// hard ones.
pub fn trace_branch<T: Real>(g: &Game<T>, lambda_max: T, opts: &BranchOptions<T>) -> Result<BranchTrace<T>> {
    if !lambda_max.is_finite() || lambda_max < T::zero() {
        return Err(Error::InvalidArgument(format!("lambda_max must be finite and >= 0, got {lambda_max}")));
    }
    let centroid = MixedProfile::centroid_of(g);
    let start = solve_fixed_point(g, &LogitParams::new(T::zero())?, &centroid, &opts.solver)?.into_converged()?;
    let mut samples = vec![BranchSample { lambda: T::zero(), profile: start.profile, residual: start.residual }];
    if lambda_max == T::zero() {
        return Ok(BranchTrace { samples, termination: Termination::LambdaMax, lambda_max });
    }

    let max_step = opts.max_step_fraction * lambda_max;
    let min_step = opts.min_step_fraction * lambda_max;
    let mut step = opts.initial_step_fraction * lambda_max;
    let mut lambda = T::zero();
    let termination = loop {
        let prev = &samples.last().expect("non-empty").profile;
        if lambda >= lambda_max {
            break Termination::LambdaMax;
        }
        if opts.purity_threshold.is_some_and(|t| is_pure(prev, t)) {
            break Termination::Pure;
        }
        let tangent = logit_tangent(g, &LogitParams::new(lambda)?, prev);
        if let Some(t) = &tangent {
            let speed = t.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
            if speed * step > opts.max_move {
                step = (opts.max_move / speed).max(min_step);
            }
        }
        let target = (lambda + step).min(lambda_max);
        let params = LogitParams::new(target)?;
        let predicted = tangent.and_then(|t| predict(prev, &t, target - lambda)).unwrap_or_else(|| prev.clone());
        let result = newton_corrector(g, &params, &predicted, opts.solver.tol, opts.solver.max_iter, opts.contraction)
            .filter(|r| r.profile.sup_distance(&predicted) <= opts.max_move)
            .filter(|r| r.profile.sup_distance(prev) <= opts.jump_threshold);
        if let Some(result) = result {
            if result.iterations < opts.easy_iterations {
                step = (step + step).min(max_step);
            } else if result.iterations >= opts.hard_iterations {
                step = step / T::lit(2.0);
            }
            lambda = target;
            samples.push(BranchSample { lambda, profile: result.profile, residual: result.residual });
        } else {
            step = step / T::lit(2.0);
            if step < min_step {
                break Termination::CorrectorFailed;
            }
        }
    };
    Ok(BranchTrace { samples, termination, lambda_max })
}

/// The pure profile the branch settles on, if it has settled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitLabel {
    Pure { row: usize, col: usize },
    Mixed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitEquilibrium<T: Real> {
    pub profile: MixedProfile<T>,
    pub lambda: T,
    pub label: LimitLabel,
}

impl<T: Real> LimitEquilibrium<T> {
    /// `(H,H)`-style label using the game's strategy labels.
    pub fn describe(&self, g: &Game<T>) -> String {
        match self.label {
            LimitLabel::Pure { row, col } => {
                format!("({},{})", g.label(PlayerSide::Row, row), g.label(PlayerSide::Column, col))
            }
            LimitLabel::Mixed => format!("mixed/undecided at lambda={}", self.lambda),
        }
    }
}

/// Labels the terminal profile of a trace with its pure strategies when every
/// probability is within `1 - purity_threshold` of 0 or 1.
pub fn limit_equilibrium<T: Real>(trace: &BranchTrace<T>, purity_threshold: T) -> LimitEquilibrium<T> {
    let terminal = trace.terminal();
    let p = &terminal.profile;
    let argmax = |v: &[T]| {
        v.iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |(bi, bx), (i, &x)| if x > bx { (i, x) } else { (bi, bx) })
            .0
    };
    let label = if is_pure(p, purity_threshold) {
        LimitLabel::Pure { row: argmax(&p.row), col: argmax(&p.col) }
    } else {
        LimitLabel::Mixed
    };
    LimitEquilibrium { profile: p.clone(), lambda: terminal.lambda, label }
}
