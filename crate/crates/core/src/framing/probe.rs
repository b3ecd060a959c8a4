use crate::error::{Error, Result};
use crate::framing::assessor::Assessor;
use crate::game::{Game, PlayerSide};
use crate::scalar::Real;

/// `1e-5 * max(1, |a_ij|)`.
pub fn default_probe_step<T: Real>(g: &Game<T>, i: usize, j: usize) -> T {
    T::lit(1e-5) * T::one().max(g.a(i, j).abs())
}

/// Central-difference estimate of the row assessment's derivative with
/// respect to the row player's payoff `a_ij`.
pub fn derivative_probe<T: Real, A: Assessor<T> + ?Sized>(assessor: &A, g: &Game<T>, i: usize, j: usize, h: T) -> Result<Vec<T>> {
    check_step(h)?;
    let up = g.map_row_payoff(i, j, |a| a + h)?;
    let down = g.map_row_payoff(i, j, |a| a - h)?;
    central(assessor, &up, &down, h)
}

/// Central-difference derivative along `direction`, a row-major `m x n`
/// perturbation of the row player's payoffs.
pub fn directional_probe<T: Real, A: Assessor<T> + ?Sized>(assessor: &A, g: &Game<T>, direction: &[T], h: T) -> Result<Vec<T>> {
    check_step(h)?;
    let up = g.shift_row_payoffs(direction, h)?;
    let down = g.shift_row_payoffs(direction, -h)?;
    central(assessor, &up, &down, h)
}

fn check_step<T: Real>(h: T) -> Result<()> {
    if h > T::zero() && h.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("probe step must be positive, got {h}")))
    }
}

fn central<T: Real, A: Assessor<T> + ?Sized>(assessor: &A, up: &Game<T>, down: &Game<T>, h: T) -> Result<Vec<T>> {
    let fu = assessor.assess(up, PlayerSide::Row)?;
    let fd = assessor.assess(down, PlayerSide::Row)?;
    let two_h = h + h;
    Ok(fu.values.iter().zip(&fd.values).map(|(&u, &d)| (u - d) / two_h).collect())
}
