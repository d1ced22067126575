use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use super::{parse_rational, Ring, RingError, Sign};

/// A polynomial in the exponent `d` with rational coefficients.
///
/// `coeffs[k]` is the coefficient of `d^k`. Trailing zeros are always
/// trimmed, so the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DPolynomial {
    coeffs: Vec<BigRational>,
}

impl DPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        DPolynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        DPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate `d`.
    pub fn indeterminate() -> Self {
        Self::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn neg(&self) -> Self {
        DPolynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(k.into()))
                .collect(),
        )
    }

    /// Euclidean division; fails for a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), RingError> {
        let lead = divisor.leading().ok_or(RingError::DivisionByZero)?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / lead;
            if !c.is_zero() {
                for (i, b) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= &c * b;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Horner evaluation in any ring containing Q.
    pub fn evaluate<R: Ring>(&self, ring: &R, at: &R::Elem) -> R::Elem {
        self.coeffs.iter().rev().fold(ring.zero(), |acc, c| {
            ring.add(&ring.mul(&acc, at), &ring.from_rational(c))
        })
    }

    pub fn eval_rational(&self, at: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * at + c)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(|c| Value::String(c.to_string())).collect())
    }

    pub fn from_json(v: &Value) -> Result<Self, RingError> {
        let items = v
            .as_array()
            .ok_or_else(|| RingError::Decode(format!("expected coefficient array, got {v}")))?;
        items
            .iter()
            .map(|c| {
                c.as_str()
                    .ok_or_else(|| RingError::Decode(format!("expected rational string, got {c}")))
                    .and_then(parse_rational)
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self::new)
    }
}

impl fmt::Display for DPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 if show_coeff => write!(f, "*d")?,
                1 => write!(f, "d")?,
                _ if show_coeff => write!(f, "*d^{k}")?,
                _ => write!(f, "d^{k}")?,
            }
        }
        Ok(())
    }
}

/// The ring Q[d] of polynomials in the formal exponent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct PolyRing;

impl Ring for PolyRing {
    type Elem = DPolynomial;

    fn tag(&self) -> &'static str {
        "dpoly"
    }

    fn zero(&self) -> DPolynomial {
        DPolynomial::zero()
    }

    fn one(&self) -> DPolynomial {
        DPolynomial::constant(BigRational::one())
    }

    fn from_rational(&self, r: &BigRational) -> DPolynomial {
        DPolynomial::constant(r.clone())
    }

    fn add(&self, x: &DPolynomial, y: &DPolynomial) -> DPolynomial {
        x.add(y)
    }

    fn neg(&self, x: &DPolynomial) -> DPolynomial {
        x.neg()
    }

    fn sub(&self, x: &DPolynomial, y: &DPolynomial) -> DPolynomial {
        x.sub(y)
    }

    fn mul(&self, x: &DPolynomial, y: &DPolynomial) -> DPolynomial {
        x.mul(y)
    }

    fn mul_int(&self, x: &DPolynomial, n: i64) -> DPolynomial {
        x.scale(&BigRational::from_integer(n.into()))
    }

    /// Exact division; fails unless `y` divides `x` in Q[d].
    fn div(&self, x: &DPolynomial, y: &DPolynomial) -> Result<DPolynomial, RingError> {
        let (q, r) = x.div_rem(y)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(RingError::NotDivisible(format!("({x}) / ({y})")))
        }
    }

    fn div_int(&self, x: &DPolynomial, n: i64) -> Result<DPolynomial, RingError> {
        if n == 0 {
            return Err(RingError::DivisionByZero);
        }
        Ok(x.scale(&BigRational::new(1.into(), n.into())))
    }

    fn is_zero(&self, x: &DPolynomial) -> bool {
        x.is_zero()
    }

    fn sign(&self, _x: &DPolynomial) -> Result<Sign, RingError> {
        Err(RingError::UnsupportedSign("dpoly"))
    }

    fn to_json(&self, x: &DPolynomial) -> Value {
        x.to_json()
    }

    fn from_json(&self, v: &Value) -> Result<DPolynomial, RingError> {
        DPolynomial::from_json(v)
    }

    fn approx_f64(&self, _x: &DPolynomial) -> Option<f64> {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{QuadraticField, Rationals};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn negated_d_squared() {
        let d = DPolynomial::indeterminate();
        let m = PolyRing.mul(&d.neg(), &d.neg());
        assert_eq!(m, DPolynomial::from_ints(&[0, 0, 1]));
    }

    #[test]
    fn trims_trailing_zeros() {
        let p = DPolynomial::from_ints(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(DPolynomial::from_ints(&[0, 0]).degree(), None);
    }

    #[test]
    fn cubic_coefficient_at_one() {
        // -d^3/6 + 3d^2/2 - d/3
        let p = DPolynomial::new(vec![q(0, 1), q(-1, 3), q(3, 2), q(-1, 6)]);
        assert_eq!(p.evaluate(&Rationals, &q(1, 1)), q(1, 1));
        assert_eq!(p.eval_rational(&q(1, 1)), q(1, 1));
    }

    #[test]
    fn minus_d_at_zero() {
        let p = DPolynomial::indeterminate().neg();
        assert_eq!(p.evaluate(&Rationals, &q(0, 1)), q(0, 1));
    }

    #[test]
    fn minimal_polynomial_vanishes_at_critical_exponent() {
        let p = DPolynomial::from_ints(&[2, -9, 1]);
        let (k, x) = QuadraticField::critical_exponent();
        assert!(k.is_zero(&p.evaluate(&k, &x)));
    }

    #[test]
    fn cubic_factorisation() {
        // -(d/6)(d^2 - 9d + 2) == -d^3/6 + 3d^2/2 - d/3
        let lhs = DPolynomial::new(vec![q(0, 1), q(-1, 6)]).mul(&DPolynomial::from_ints(&[2, -9, 1]));
        let rhs = DPolynomial::new(vec![q(0, 1), q(-1, 3), q(3, 2), q(-1, 6)]);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn division() {
        let p = DPolynomial::from_ints(&[0, -2, 9, -1]);
        let f = DPolynomial::from_ints(&[2, -9, 1]);
        assert_eq!(PolyRing.div(&p, &f).unwrap(), DPolynomial::from_ints(&[0, -1]));
        assert!(matches!(PolyRing.div(&f, &p), Err(RingError::NotDivisible(_))));
        assert_eq!(PolyRing.div(&p, &DPolynomial::zero()), Err(RingError::DivisionByZero));
    }

    #[test]
    fn sign_is_unsupported() {
        assert_eq!(PolyRing.sign(&DPolynomial::indeterminate()), Err(RingError::UnsupportedSign("dpoly")));
    }

    #[test]
    fn display() {
        let p = DPolynomial::new(vec![q(0, 1), q(-1, 3), q(3, 2), q(-1, 6)]);
        assert_eq!(p.to_string(), "-1/6*d^3 + 3/2*d^2 - 1/3*d");
        assert_eq!(DPolynomial::indeterminate().neg().to_string(), "-d");
    }
}
