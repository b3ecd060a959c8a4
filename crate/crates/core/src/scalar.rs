//! Numeric bounds shared by the whole crate.
//!
//! Game representation, equivalence and the closed-form weak-selection
//! assessment only need field arithmetic, so they are generic over
//! [`Payoff`], which exact rationals also implement. Anything that
//! exponentiates payoffs (logit responses, the Moran fitness map) needs
//! [`Real`].

use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// A payoff entry: exact or floating point.
pub trait Payoff:
    Num + Copy + PartialOrd + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// `false` for NaN and infinities. Exact types are always finite.
    fn is_finite_payoff(&self) -> bool;

    /// Converts a small count (a number of rows, columns or copies).
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in payoff type")
    }

    /// Converts an `f64` literal. Panics only if the type cannot hold it.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in payoff type")
    }

    fn abs_diff(self, other: Self) -> Self {
        if self >= other {
            self - other
        } else {
            other - self
        }
    }
}

impl Payoff for f32 {
    fn is_finite_payoff(&self) -> bool {
        self.is_finite()
    }
}

impl Payoff for f64 {
    fn is_finite_payoff(&self) -> bool {
        self.is_finite()
    }
}

impl Payoff for Ratio<i64> {
    fn is_finite_payoff(&self) -> bool {
        true
    }
}

impl Payoff for Ratio<i128> {
    fn is_finite_payoff(&self) -> bool {
        true
    }
}

/// Floating-point payoffs, required by every smooth (exponential) map.
pub trait Real: Payoff + Float {
    /// Default convergence tolerance for fixed-point solves in this precision.
    fn default_tolerance() -> Self {
        Self::lit(1e-10).max(Self::epsilon() * Self::lit(64.0))
    }
}

impl<T: Payoff + Float> Real for T {}
