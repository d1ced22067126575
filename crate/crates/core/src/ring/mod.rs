//! Coefficient rings.
//!
//! Every series in this crate is built over one of four scalar domains:
//!
//! - [`Rationals`]: exact arbitrary-precision fractions.
//! - [`QuadraticField`]: exact elements `a + b·√D` of a real quadratic field.
//! - [`PolyRing`]: polynomials in the exponent `d` with rational coefficients.
//! - [`IntervalField`]: outward-rounded dyadic intervals at a fixed precision.
//!
//! A ring is a small context value (it may carry `D` or the precision) and its
//! elements are plain data. Two series can only be combined when their ring
//! contexts compare equal.

mod dpoly;
mod interval;
mod quadratic;
mod rational;

pub use dpoly::{DPolynomial, PolyRing};
pub use interval::{Dyadic, IntervalField, IntervalValue, DEFAULT_BITS, MAX_BITS};
pub use quadratic::{QuadraticElement, QuadraticField};
pub use rational::{format_rational, parse_rational, Rationals};

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("interval divisor [{lo}, {hi}] contains zero")]
    DivisorStraddlesZero { lo: String, hi: String },
    #[error("{0} is not exactly divisible")]
    NotDivisible(String),
    #[error("sign query is not supported in the {0} ring")]
    UnsupportedSign(&'static str),
    #[error("ring mismatch: {0} vs {1}")]
    Mismatch(String, String),
    #[error("invalid ring parameter: {0}")]
    InvalidParameter(String),
    #[error("cannot decode ring element: {0}")]
    Decode(String),
}

/// Result of a sign query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
    /// Only produced by the interval ring.
    Unknown,
}

impl Sign {
    pub fn of_ordering(ord: std::cmp::Ordering) -> Sign {
        match ord {
            std::cmp::Ordering::Less => Sign::Negative,
            std::cmp::Ordering::Equal => Sign::Zero,
            std::cmp::Ordering::Greater => Sign::Positive,
        }
    }

    pub fn of_bigint(x: &BigInt) -> Sign {
        match x.sign() {
            num_bigint::Sign::Minus => Sign::Negative,
            num_bigint::Sign::NoSign => Sign::Zero,
            num_bigint::Sign::Plus => Sign::Positive,
        }
    }
}

/// Verdict on whether a single coefficient is `>= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nonnegativity {
    Holds,
    Violated,
    Unknown,
}

/// A commutative ring containing the rationals, with exact or enclosing
/// arithmetic.
#[allow(clippy::wrong_self_convention)]
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    /// Short identifier used in serialized reports: `rational`, `quadratic`,
    /// `dpoly` or `interval`.
    fn tag(&self) -> &'static str;

    /// Human-readable description including ring parameters.
    fn describe(&self) -> String {
        self.tag().to_string()
    }

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;

    /// The canonical embedding of Q (an enclosure for the interval ring).
    fn from_rational(&self, r: &BigRational) -> Self::Elem;

    fn from_int(&self, n: i64) -> Self::Elem {
        self.from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn div(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem, RingError>;

    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.add(x, &self.neg(y))
    }

    /// `x · n` for a machine integer.
    fn mul_int(&self, x: &Self::Elem, n: i64) -> Self::Elem {
        self.mul(x, &self.from_int(n))
    }

    /// `x / n` for a nonzero machine integer.
    fn div_int(&self, x: &Self::Elem, n: i64) -> Result<Self::Elem, RingError> {
        if n == 0 {
            return Err(RingError::DivisionByZero);
        }
        self.div(x, &self.from_int(n))
    }

    /// Exact zero test. For intervals this means the degenerate point `[0, 0]`.
    fn is_zero(&self, x: &Self::Elem) -> bool;

    fn is_one(&self, x: &Self::Elem) -> bool {
        *x == self.one()
    }

    fn sign(&self, x: &Self::Elem) -> Result<Sign, RingError>;

    fn nonnegativity(&self, x: &Self::Elem) -> Result<Nonnegativity, RingError> {
        Ok(match self.sign(x)? {
            Sign::Negative => Nonnegativity::Violated,
            Sign::Zero | Sign::Positive => Nonnegativity::Holds,
            Sign::Unknown => Nonnegativity::Unknown,
        })
    }

    fn to_json(&self, x: &Self::Elem) -> Value;
    fn from_json(&self, v: &Value) -> Result<Self::Elem, RingError>;

    /// Approximate value for display only; never used in a verdict.
    fn approx_f64(&self, x: &Self::Elem) -> Option<f64>;

    /// Fails with [`RingError::Mismatch`] unless both contexts are equal.
    fn check_same(&self, other: &Self) -> Result<(), RingError> {
        if self == other {
            Ok(())
        } else {
            Err(RingError::Mismatch(self.describe(), other.describe()))
        }
    }
}

/// Approximate a rational as `f64` without overflowing on huge numerators and
/// denominators.
pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::{ToPrimitive, Zero};
    if r.is_zero() {
        return 0.0;
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    // keep ~60 significant bits of each before dividing
    let ns = (nb - 60).max(0);
    let ds = (db - 60).max(0);
    let n = (r.numer() >> ns as usize).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> ds as usize).to_f64().unwrap_or(f64::NAN);
    let exp = (ns - ds) as i32;
    (n / d) * 2f64.powi(exp)
}
