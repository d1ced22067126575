use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::Value;

use super::{rational_to_f64, Ring, RingError, Sign};

/// The field Q of rational numbers. Elements are [`BigRational`], which
/// num-rational keeps in lowest terms with a positive denominator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn tag(&self) -> &'static str {
        "rational"
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_rational(&self, r: &BigRational) -> BigRational {
        r.clone()
    }

    fn add(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x + y
    }

    fn neg(&self, x: &BigRational) -> BigRational {
        -x
    }

    fn sub(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x - y
    }

    fn mul(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x * y
    }

    fn mul_int(&self, x: &BigRational, n: i64) -> BigRational {
        x * BigInt::from(n)
    }

    fn div(&self, x: &BigRational, y: &BigRational) -> Result<BigRational, RingError> {
        if y.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        Ok(x / y)
    }

    fn div_int(&self, x: &BigRational, n: i64) -> Result<BigRational, RingError> {
        if n == 0 {
            return Err(RingError::DivisionByZero);
        }
        Ok(x / BigInt::from(n))
    }

    fn is_zero(&self, x: &BigRational) -> bool {
        x.is_zero()
    }

    fn sign(&self, x: &BigRational) -> Result<Sign, RingError> {
        Ok(Sign::of_bigint(x.numer()))
    }

    fn to_json(&self, x: &BigRational) -> Value {
        Value::String(format_rational(x))
    }

    fn from_json(&self, v: &Value) -> Result<BigRational, RingError> {
        match v {
            Value::String(s) => parse_rational(s),
            other => Err(RingError::Decode(format!("expected rational string, got {other}"))),
        }
    }

    fn approx_f64(&self, x: &BigRational) -> Option<f64> {
        Some(rational_to_f64(x))
    }
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &BigRational) -> String {
    r.to_string()
}

/// Parses `p`, `p/q` or a plain decimal such as `-0.228` into an exact
/// rational.
pub fn parse_rational(s: &str) -> Result<BigRational, RingError> {
    let s = s.trim();
    let bad = || RingError::Decode(format!("not a rational number: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.starts_with('-');
        let digits_ok = |t: &str| t.chars().all(|c| c.is_ascii_digit());
        let int_digits = int_part.trim_start_matches(['-', '+']);
        if !digits_ok(int_digits) || !digits_ok(frac_part) || (int_digits.is_empty() && frac_part.is_empty()) {
            return Err(bad());
        }
        let mantissa = BigInt::from_str(format!("{int_digits}{frac_part}").trim_start_matches('0'))
            .unwrap_or_else(|_| BigInt::zero());
        let scale = num_traits::pow(BigInt::from(10), frac_part.len());
        let r = BigRational::new(mantissa, scale);
        return Ok(if negative { -r } else { r });
    }
    BigInt::from_str(s).map(BigRational::from_integer).map_err(|_| bad())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn add_fractions() {
        assert_eq!(Rationals.add(&q(1, 2), &q(1, 3)), q(5, 6));
    }

    #[test]
    fn lowest_terms() {
        let x = q(6, -8);
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(4));
    }

    #[test]
    fn sign_of_negative_fraction() {
        assert_eq!(Rationals.sign(&q(-3, 7)).unwrap(), Sign::Negative);
        assert_eq!(Rationals.sign(&q(0, 7)).unwrap(), Sign::Zero);
    }

    #[test]
    fn divide_by_zero_is_an_error() {
        assert_eq!(Rationals.div(&q(1, 2), &q(0, 1)), Err(RingError::DivisionByZero));
        assert_eq!(Rationals.div_int(&q(1, 2), 0), Err(RingError::DivisionByZero));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("1/5").unwrap(), q(1, 5));
        assert_eq!(parse_rational("-3").unwrap(), q(-3, 1));
        assert_eq!(parse_rational("0.23").unwrap(), q(23, 100));
        assert_eq!(parse_rational("-0.25").unwrap(), q(-1, 4));
        assert_eq!(parse_rational("2.").unwrap(), q(2, 1));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn json_round_trip() {
        let x = q(-7, 12);
        let v = Rationals.to_json(&x);
        assert_eq!(v, Value::String("-7/12".into()));
        assert_eq!(Rationals.from_json(&v).unwrap(), x);
    }
}
