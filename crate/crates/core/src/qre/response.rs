use crate::error::{Error, Result};
use crate::scalar::Real;

/// A smooth stochastic choice rule: maps expected payoffs to choice
/// probabilities, increasing in each payoff.
pub trait ResponseMap<T: Real> {
    /// Writes choice probabilities for payoffs `u` into `out`.
    fn respond(&self, u: &[T], out: &mut [T]);

    /// Writes the row-major `k x k` derivative `d out_i / d u_l` at `u`,
    /// where `sigma` is the response already computed at `u`.
    fn jacobian(&self, u: &[T], sigma: &[T], out: &mut [T]);
}

/// The logit rule `p_i = exp(lambda u_i) / sum_j exp(lambda u_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogitParams<T> {
    lambda: T,
}

impl<T: Real> LogitParams<T> {
    pub fn new(lambda: T) -> Result<Self> {
        if !lambda.is_finite() || lambda < T::zero() {
            return Err(Error::InvalidArgument(format!("lambda must be finite and >= 0, got {lambda}")));
        }
        Ok(LogitParams { lambda })
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }
}

impl<T: Real> ResponseMap<T> for LogitParams<T> {
    fn respond(&self, u: &[T], out: &mut [T]) {
        let top = u.iter().copied().fold(T::neg_infinity(), T::max);
        let mut total = T::zero();
        for (o, &x) in out.iter_mut().zip(u) {
            *o = (self.lambda * (x - top)).exp();
            total = total + *o;
        }
        out.iter_mut().for_each(|o| *o = *o / total);
    }

    fn jacobian(&self, _u: &[T], sigma: &[T], out: &mut [T]) {
        let k = sigma.len();
        for i in 0..k {
            for l in 0..k {
                let delta = if i == l { T::one() } else { T::zero() };
                out[i * k + l] = self.lambda * sigma[i] * (delta - sigma[l]);
            }
        }
    }
}

/// Logit choice probabilities, computed max-shifted for stability.
pub fn logit_response<T: Real>(u: &[T], params: &LogitParams<T>) -> Vec<T> {
    let mut out = vec![T::zero(); u.len()];
    params.respond(u, &mut out);
    out
}
