//! Scalar types that can carry cylinder measures.
//!
//! The measure routines in [`crate::measure`] are written once against
//! [`MeasureScalar`] and instantiated for the exact [`Dyadic`] type (the
//! default everywhere), for `BigRational` as an independent exact route, and
//! for `f64`/`f32` when a quick approximate view is enough.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::ops::{Add, Mul};

use crate::dyadic::Dyadic;

pub trait MeasureScalar:
    Clone + PartialOrd + Zero + One + Add<Output = Self> + Mul<Output = Self>
{
    /// `2^k` for any integer `k`.
    fn pow2(k: i64) -> Self;

    /// Measure of one cylinder of length `len`.
    fn cylinder(len: usize) -> Self {
        Self::pow2(-(len as i64))
    }
}

impl MeasureScalar for Dyadic {
    fn pow2(k: i64) -> Self {
        Dyadic::pow2(k)
    }
}

impl MeasureScalar for BigRational {
    fn pow2(k: i64) -> Self {
        let p = BigInt::one() << k.unsigned_abs();
        if k >= 0 {
            BigRational::from_integer(p)
        } else {
            BigRational::new(BigInt::one(), p)
        }
    }
}

impl MeasureScalar for f64 {
    fn pow2(k: i64) -> Self {
        2f64.powi(k as i32)
    }
}

impl MeasureScalar for f32 {
    fn pow2(k: i64) -> Self {
        2f32.powi(k as i32)
    }
}

/// Exact conversion of a dyadic into a big rational.
pub fn dyadic_to_rational(d: &Dyadic) -> BigRational {
    BigRational::new(
        BigInt::from(d.numerator().clone()),
        BigInt::one() << d.exponent(),
    )
}
