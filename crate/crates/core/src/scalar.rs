//! Scalar fields the algebra is generic over.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed, Zero};

/// An ordered field with exact (or, for floats, best-effort) zero tests.
///
/// Every routine in [`crate::exact_algebra`] and [`crate::milnor`] is written
/// against this trait. The analysis pipeline instantiates it with
/// [`BigRational`]; `Ratio<i64>` and `f64` are supported for experiments
/// where exactness is not needed or overflow is not a concern.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + PartialOrd + Num + Signed + FromPrimitive + Send + Sync
{
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer fits in the scalar type")
    }

    /// `n / d` as a field element.
    fn ratio(n: i64, d: i64) -> Self {
        Self::from_int(n) / Self::from_int(d)
    }

    /// True when the element is exactly representable as an integer.
    fn is_integral(&self) -> bool;
}

impl Scalar for BigRational {
    fn is_integral(&self) -> bool {
        self.is_integer()
    }
}

impl Scalar for Ratio<i64> {
    fn is_integral(&self) -> bool {
        self.is_integer()
    }
}

impl Scalar for f64 {
    fn is_integral(&self) -> bool {
        self.fract() == 0.0
    }
}

/// Parse `"p/q"` or `"p"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Exact rational from an integer pair; panics on a zero denominator.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn is_one<F: Scalar>(c: &F) -> bool {
    *c == F::one()
}
