//! Scalar abstraction for the transfer-matrix analytics.
//!
//! Everything computed from the transfer matrices of `|ψ_x⟩` — norms,
//! energy moments, correlation functions, reduced-density-matrix spectra —
//! is a rational number whose denominator is a power of two. The analytics
//! are therefore written once, generically, and instantiated both at `f64`
//! (cheap, approximate) and at [`crate::Exact`] (exact, used to pin closed
//! forms without tolerances).

use num_rational::Ratio;
use num_traits::{One, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Field operations needed by the transfer algebra.
pub trait Scalar:
    Copy
    + PartialEq
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    /// The exact rational `num / den`.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    /// Lossy conversion for reporting and entropy evaluation.
    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Ratio<i128> {
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num as i128, den as i128)
    }

    fn to_f64(&self) -> f64 {
        // denominators here are powers of two, so the division is exact
        // whenever the numerator fits in a double
        *self.numer() as f64 / *self.denom() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Exact;

    #[test]
    fn ratio_round_trip() {
        let x = Exact::from_ratio(-3, 1024);
        assert_eq!(x.to_f64(), -3.0 / 1024.0);
        assert_eq!(Exact::from_int(7), Exact::from_ratio(7, 1));
    }

    #[test]
    fn f64_matches_exact_on_dyadics() {
        for (n, d) in [(1, 2), (-5, 64), (3, 1), (0, 7)] {
            assert_eq!(f64::from_ratio(n, d), Exact::from_ratio(n, d).to_f64());
        }
    }
}
