use crate::error::{Error, Result};
use crate::game::{Game, MixedProfile, PlayerSide};
use crate::linalg::solve_dense;
use crate::qre::response::{LogitParams, ResponseMap};
use crate::scalar::Real;

/// Settings for [`solve_fixed_point`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings<T> {
    /// Sup-norm bound on `p - sigma(u(p))`.
    pub tol: T,
    pub max_iter: usize,
    /// Weight `omega` of the damped update `p <- (1 - omega) p + omega sigma(u(p))`.
    pub damping: T,
    /// Residual below which Newton steps are tried. `None` disables Newton.
    pub newton_threshold: Option<T>,
}

impl<T: Real> Default for SolverSettings<T> {
    fn default() -> Self {
        SolverSettings {
            tol: T::default_tolerance(),
            max_iter: 10_000,
            damping: T::lit(0.5),
            newton_threshold: Some(T::lit(1e-4)),
        }
    }
}

impl<T: Real> SolverSettings<T> {
    pub fn with_tol(mut self, tol: T) -> Self {
        self.tol = tol;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > T::zero()) {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        if !(self.damping > T::zero() && self.damping <= T::one()) {
            return Err(Error::InvalidArgument("damping must lie in (0, 1]".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointResult<T: Real> {
    /// Converged profile, or the best one seen when `converged` is false.
    pub profile: MixedProfile<T>,
    /// `||p - sigma(u(p))||_inf` at `profile`.
    pub residual: T,
    /// Number of updates applied to the initial profile.
    pub iterations: usize,
    pub converged: bool,
}

impl<T: Real> FixedPointResult<T> {
    /// Turns a non-converged result into [`Error::NonConvergence`].
    pub fn into_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NonConvergence {
                residual: self.residual.to_f64().unwrap_or(f64::NAN),
                iterations: self.iterations,
            })
        }
    }
}

/// Scratch buffers for evaluating `sigma(u(p))` on one game.
struct Evaluator<'a, T: Real, R> {
    game: &'a Game<T>,
    response: &'a R,
    u_row: Vec<T>,
    u_col: Vec<T>,
}

impl<'a, T: Real, R: ResponseMap<T>> Evaluator<'a, T, R> {
    fn new(game: &'a Game<T>, response: &'a R) -> Self {
        Evaluator { game, response, u_row: vec![T::zero(); game.rows()], u_col: vec![T::zero(); game.cols()] }
    }

    /// Writes the best response profile into `out` and returns the residual.
    fn respond(&mut self, p: &MixedProfile<T>, out: &mut MixedProfile<T>) -> T {
        self.game.expected_payoffs_into(&p.col, PlayerSide::Row, &mut self.u_row);
        self.game.expected_payoffs_into(&p.row, PlayerSide::Column, &mut self.u_col);
        self.response.respond(&self.u_row, &mut out.row);
        self.response.respond(&self.u_col, &mut out.col);
        p.sup_distance(out)
    }

    /// Row-major Jacobian of `F(p) = p - sigma(u(p))`, given `s = sigma(u(p))`
    /// from the preceding [`Self::respond`] call.
    fn residual_jacobian(&self, s: &MixedProfile<T>) -> Vec<T> {
        let (m, n) = (self.game.rows(), self.game.cols());
        let dim = m + n;
        let mut jr = vec![T::zero(); m * m];
        let mut jc = vec![T::zero(); n * n];
        self.response.jacobian(&self.u_row, &s.row, &mut jr);
        self.response.jacobian(&self.u_col, &s.col, &mut jc);

        let mut jac = vec![T::zero(); dim * dim];
        for d in 0..dim {
            jac[d * dim + d] = T::one();
        }
        // d sigma_row / d p_col = J_row * A
        for i in 0..m {
            for j in 0..n {
                let v = (0..m).fold(T::zero(), |acc, k| acc + jr[i * m + k] * self.game.a(k, j));
                jac[i * dim + m + j] = -v;
            }
        }
        // d sigma_col / d p_row = J_col * B^T
        for j in 0..n {
            for l in 0..m {
                let v = (0..n).fold(T::zero(), |acc, k| acc + jc[j * n + k] * self.game.b(l, k));
                jac[(m + j) * dim + l] = -v;
            }
        }
        jac
    }

    /// Newton update `d` with `J d = sigma(u(p)) - p`, or `None` if the
    /// Jacobian is singular.
    fn newton_direction(&self, p: &MixedProfile<T>, s: &MixedProfile<T>) -> Option<Vec<T>> {
        let dim = p.row.len() + p.col.len();
        let mut jac = self.residual_jacobian(s);
        let mut rhs: Vec<T> = p.row.iter().zip(&s.row).chain(p.col.iter().zip(&s.col)).map(|(&x, &y)| y - x).collect();
        solve_dense(&mut jac, &mut rhs, dim)?;
        Some(rhs)
    }

    /// One Newton step on `F`. Returns `None` if the Jacobian is singular or
    /// the step leaves the open simplex.
    fn newton(&self, p: &MixedProfile<T>, s: &MixedProfile<T>) -> Option<MixedProfile<T>> {
        let d = self.newton_direction(p, s)?;
        apply_step(p, &d, T::one())
    }
}

/// `p + scale * d`, renormalized; `None` unless every entry stays positive.
fn apply_step<T: Real>(p: &MixedProfile<T>, d: &[T], scale: T) -> Option<MixedProfile<T>> {
    let mut next = p.clone();
    for (x, &dx) in next.row.iter_mut().chain(next.col.iter_mut()).zip(d) {
        *x = *x + scale * dx;
        if !(*x > T::zero()) || !x.is_finite() {
            return None;
        }
    }
    normalize(&mut next.row);
    normalize(&mut next.col);
    Some(next)
}

fn sup_norm<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
}

/// Pure Newton iteration from `init` that gives up as soon as an update is
/// not at most `contraction` times the previous one, so it only converges
/// to a root close to `init`.
pub(crate) fn newton_corrector<T: Real, R: ResponseMap<T>>(
    g: &Game<T>,
    response: &R,
    init: &MixedProfile<T>,
    tol: T,
    max_iter: usize,
    contraction: T,
) -> Option<FixedPointResult<T>> {
    let mut eval = Evaluator::new(g, response);
    let mut p = init.clone();
    let mut s = init.clone();
    let mut residual = eval.respond(&p, &mut s);
    let mut last: Option<T> = None;
    for iter in 0..max_iter {
        if residual <= tol {
            return Some(FixedPointResult { profile: p, residual, iterations: iter, converged: true });
        }
        let d = eval.newton_direction(&p, &s)?;
        let size = sup_norm(&d);
        if last.is_some_and(|l| size > contraction * l) {
            return None;
        }
        p = apply_step(&p, &d, T::one())?;
        residual = eval.respond(&p, &mut s);
        last = Some(size);
    }
    (residual <= tol).then_some(FixedPointResult { profile: p, residual, iterations: max_iter, converged: true })
}

/// `dp/dlambda` along the logit fixed-point curve at `p`, from
/// `J dp/dlambda = d sigma / d lambda`.
pub(crate) fn logit_tangent<T: Real>(g: &Game<T>, params: &LogitParams<T>, p: &MixedProfile<T>) -> Option<Vec<T>> {
    let mut eval = Evaluator::new(g, params);
    let mut s = p.clone();
    eval.respond(p, &mut s);
    // d sigma_i / d lambda = sigma_i (u_i - sum_k sigma_k u_k)
    let dl = |sigma: &[T], u: &[T]| {
        let mean = sigma.iter().zip(u).fold(T::zero(), |acc, (&x, &y)| acc + x * y);
        sigma.iter().zip(u).map(|(&x, &y)| x * (y - mean)).collect::<Vec<T>>()
    };
    let mut rhs = dl(&s.row, &eval.u_row);
    rhs.extend(dl(&s.col, &eval.u_col));
    let mut jac = eval.residual_jacobian(&s);
    let dim = rhs.len();
    solve_dense(&mut jac, &mut rhs, dim)?;
    Some(rhs)
}

/// `p + step * t` when that stays in the open simplex.
pub(crate) fn predict<T: Real>(p: &MixedProfile<T>, tangent: &[T], step: T) -> Option<MixedProfile<T>> {
    apply_step(p, tangent, step)
}

fn normalize<T: Real>(v: &mut [T]) {
    let total = v.iter().fold(T::zero(), |s, &x| s + x);
    v.iter_mut().for_each(|x| *x = *x / total);
}

/// `||p - sigma(u(p))||_inf`.
pub fn fixed_point_residual<T: Real, R: ResponseMap<T>>(g: &Game<T>, response: &R, profile: &MixedProfile<T>) -> Result<T> {
    if !profile.fits(g) {
        return Err(Error::DimensionMismatch("profile does not fit the game".into()));
    }
    let mut out = profile.clone();
    Ok(Evaluator::new(g, response).respond(profile, &mut out))
}

/// Finds `p` with `p = sigma(u(p))` by damped fixed-point iteration,
/// switching to Newton steps once the residual falls below
/// `settings.newton_threshold`. A Newton step is kept only if it stays in
/// the open simplex and lowers the residual.
///
/// Invalid input is an error; running out of iterations is not, and is
/// reported through [`FixedPointResult::converged`].
pub fn solve_fixed_point<T: Real, R: ResponseMap<T>>(
    g: &Game<T>,
    response: &R,
    init: &MixedProfile<T>,
    settings: &SolverSettings<T>,
) -> Result<FixedPointResult<T>> {
    settings.validate()?;
    if !init.fits(g) {
        return Err(Error::DimensionMismatch(format!(
            "initial profile has shape {}x{}, game is {}x{}",
            init.row.len(),
            init.col.len(),
            g.rows(),
            g.cols()
        )));
    }
    let mut eval = Evaluator::new(g, response);
    let mut p = init.clone();
    let mut s = init.clone();
    let mut residual = eval.respond(&p, &mut s);
    let mut best = (p.clone(), residual);
    let omega = settings.damping;

    for iter in 0..settings.max_iter {
        if residual <= settings.tol {
            return Ok(FixedPointResult { profile: p, residual, iterations: iter, converged: true });
        }
        let newton_ok = settings.newton_threshold.is_some_and(|t| residual < t);
        let mut advanced = false;
        if newton_ok {
            if let Some(q) = eval.newton(&p, &s) {
                let mut sq = q.clone();
                let rq = eval.respond(&q, &mut sq);
                if rq < residual {
                    p = q;
                    s = sq;
                    residual = rq;
                    advanced = true;
                }
            }
        }
        if !advanced {
            for (x, y) in p.row.iter_mut().chain(p.col.iter_mut()).zip(s.row.iter().chain(&s.col)) {
                *x = (T::one() - omega) * *x + omega * *y;
            }
            residual = eval.respond(&p, &mut s);
        }
        if residual < best.1 {
            best = (p.clone(), residual);
        }
    }
    if residual <= settings.tol {
        return Ok(FixedPointResult { profile: p, residual, iterations: settings.max_iter, converged: true });
    }
    Ok(FixedPointResult { profile: best.0, residual: best.1, iterations: settings.max_iter, converged: false })
}
