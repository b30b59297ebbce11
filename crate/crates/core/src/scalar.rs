//! Scalar backends.
//!
//! All tensor code is generic over [`Ring`] (or [`Field`] where division or
//! ordering is needed). Three instantiations exist: [`Rational`] for exact
//! arithmetic, `f64` for floating point, and
//! [`SparsePoly`](crate::poly::SparsePoly) for symbolic expansion.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept normalised.
pub type Rational = num_rational::BigRational;

/// Commutative ring with unit.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;

    fn add_assign(&mut self, rhs: &Self) {
        *self = self.add(rhs);
    }

    /// `self += a * b`
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self = self.add(&a.mul(b));
    }

    fn scale_i64(&self, n: i64) -> Self {
        self.mul(&Self::from_i64(n))
    }

    fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Ordered field with a lossy view into `f64`.
pub trait Field: Ring + PartialOrd {
    /// True when arithmetic is exact (no rounding).
    const EXACT: bool;

    fn div(&self, rhs: &Self) -> Self;
    fn abs(&self) -> Self;
    fn to_f64(&self) -> f64;
    fn from_ratio(num: i64, den: i64) -> Self;
}

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add_assign(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
}

impl Field for f64 {
    const EXACT: bool = false;

    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
}

impl Field for Rational {
    const EXACT: bool = true;

    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }
}

/// Which scalar backend a whole computation runs in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        })
    }
}

/// Parses `"p/q"`, `"p"` (optionally signed, optional surrounding spaces).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::ParseRational(text.to_string());
    let trimmed = text.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Formats a rational as `"p/q"`, always printing the denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_normalised() {
        let r = parse_rational("6/-4").unwrap();
        assert_eq!(format_rational(&r), "-3/2");
        assert_eq!(
            format_rational(&parse_rational("-6480").unwrap()),
            "-6480/1"
        );
        assert_eq!(format_rational(&parse_rational(" 0/7 ").unwrap()), "0/1");
    }

    #[test]
    fn rational_parse_errors() {
        for bad in ["", "1/0", "abc", "1.5", "1/2/3"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn exact_addition_has_no_rounding() {
        let a = Rational::from_ratio(1, 3);
        let b = Rational::from_ratio(1, 6);
        assert_eq!(Ring::add(&a, &b), Rational::from_ratio(1, 2));
        let mut acc = <Rational as Ring>::zero();
        for _ in 0..10 {
            Ring::add_assign(&mut acc, &Rational::from_ratio(1, 10));
        }
        assert_eq!(acc, Rational::from_i64(1));
    }
}
