use crate::error::{Error, Result};
use crate::evolution::{phi_assessment, Assessment};
use crate::game::{Game, PlayerSide};
use crate::qre::{default_lambda_max, solve_fixed_point, trace_branch, BranchOptions, LogitParams, Termination};
use crate::scalar::{Payoff, Real};

/// A deterministic map from games to a value per strategy of one player.
pub trait Assessor<T: Payoff>: Sync {
    fn name(&self) -> &str;

    fn assess(&self, g: &Game<T>, side: PlayerSide) -> Result<Assessment<T>>;
}

/// The weak-selection deviation `phi`.
#[derive(Debug, Clone, Copy, Default)]
pub struct PhiAssessor;

impl<T: Payoff> Assessor<T> for PhiAssessor {
    fn name(&self) -> &str {
        "phi"
    }

    fn assess(&self, g: &Game<T>, side: PlayerSide) -> Result<Assessment<T>> {
        Ok(phi_assessment(g, side))
    }
}

/// Terminal profile of the principal logit branch.
#[derive(Debug, Clone, Copy)]
pub struct QreTerminal<T> {
    /// `None` uses [`default_lambda_max`] of each assessed game.
    pub lambda_max: Option<T>,
    pub options: BranchOptions<T>,
}

impl<T: Real> Default for QreTerminal<T> {
    fn default() -> Self {
        QreTerminal { lambda_max: None, options: BranchOptions::default() }
    }
}

impl<T: Real> Assessor<T> for QreTerminal<T> {
    fn name(&self) -> &str {
        "qre-terminal"
    }

    fn assess(&self, g: &Game<T>, side: PlayerSide) -> Result<Assessment<T>> {
        let lambda_max = self.lambda_max.unwrap_or_else(|| default_lambda_max(g));
        let trace = trace_branch(g, lambda_max, &self.options)?;
        if trace.termination == Termination::CorrectorFailed {
            let last = trace.terminal();
            return Err(Error::NonConvergence {
                residual: last.residual.to_f64().unwrap_or(f64::NAN),
                iterations: trace.samples.len(),
            });
        }
        Ok(Assessment::new(trace.terminal_profile().side(side).to_vec(), side))
    }
}

/// Principal-branch logit equilibrium at a fixed `lambda`, polished with
/// Newton steps to near machine precision so that finite differences of the
/// result are meaningful.
#[derive(Debug, Clone, Copy)]
pub struct QreAtLambda<T> {
    pub lambda: T,
    pub options: BranchOptions<T>,
    pub polish_tol: T,
}

impl<T: Real> QreAtLambda<T> {
    pub fn new(lambda: T) -> Self {
        QreAtLambda {
            lambda,
            options: BranchOptions { purity_threshold: None, ..BranchOptions::default() },
            polish_tol: T::epsilon() * T::lit(64.0),
        }
    }
}

impl<T: Real> Assessor<T> for QreAtLambda<T> {
    fn name(&self) -> &str {
        "qre-at-lambda"
    }

    fn assess(&self, g: &Game<T>, side: PlayerSide) -> Result<Assessment<T>> {
        let trace = trace_branch(g, self.lambda, &self.options)?;
        if trace.termination == Termination::CorrectorFailed {
            return Err(Error::NonConvergence {
                residual: trace.terminal().residual.to_f64().unwrap_or(f64::NAN),
                iterations: trace.samples.len(),
            });
        }
        let settings = self.options.solver.with_tol(self.polish_tol);
        let polished = solve_fixed_point(g, &LogitParams::new(self.lambda)?, trace.terminal_profile(), &settings)?;
        // Newton stalls at the rounding floor; keep whichever point is better.
        let profile = if polished.residual <= trace.terminal().residual { polished.profile } else { trace.terminal_profile().clone() };
        Ok(Assessment::new(profile.side(side).to_vec(), side))
    }
}

/// 1 for strategies used in some pure Nash equilibrium, 0 otherwise.
#[derive(Debug, Clone, Copy, Default)]
pub struct NashArgmax;

impl<T: Payoff> Assessor<T> for NashArgmax {
    fn name(&self) -> &str {
        "nash-argmax"
    }

    fn assess(&self, g: &Game<T>, side: PlayerSide) -> Result<Assessment<T>> {
        let mut values = vec![T::zero(); g.strategy_count(side)];
        for (i, j) in g.pure_nash_equilibria() {
            let s = match side {
                PlayerSide::Row => i,
                PlayerSide::Column => j,
            };
            values[s] = T::one();
        }
        Ok(Assessment::new(values, side))
    }
}

/// Assigns the same value to every strategy.
#[derive(Debug, Clone, Copy)]
pub struct ConstantAssessor<T>(pub T);

impl<T: Payoff> Assessor<T> for ConstantAssessor<T> {
    fn name(&self) -> &str {
        "constant"
    }

    fn assess(&self, g: &Game<T>, side: PlayerSide) -> Result<Assessment<T>> {
        Ok(Assessment::new(vec![self.0; g.strategy_count(side)], side))
    }
}

pub const SHIPPED_ASSESSORS: [&str; 4] = ["phi", "qre-terminal", "qre-at-lambda", "nash-argmax"];

/// Looks up a shipped assessor by name. `qre-at-lambda` needs `lambda`;
/// `qre-terminal` uses it as `lambda_max` when given.
pub fn shipped_assessor(name: &str, lambda: Option<f64>) -> Result<Box<dyn Assessor<f64>>> {
    match name {
        "phi" => Ok(Box::new(PhiAssessor)),
        "nash-argmax" => Ok(Box::new(NashArgmax)),
        "qre-terminal" => Ok(Box::new(QreTerminal { lambda_max: lambda, ..QreTerminal::default() })),
        "qre-at-lambda" => {
            let lambda = lambda.ok_or_else(|| Error::InvalidArgument("qre-at-lambda needs a lambda".into()))?;
            LogitParams::new(lambda)?;
            Ok(Box::new(QreAtLambda::new(lambda)))
        }
        other => Err(Error::InvalidArgument(format!(
            "unknown assessor {other:?}; expected one of {}",
            SHIPPED_ASSESSORS.join(", ")
        ))),
    }
}
