use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::{parse_rational, rational_to_f64, Ring, RingError, Sign};

/// The real quadratic field Q(√D) for a square-free `D >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadraticField {
    radicand: u64,
}

/// `a + b·√D`; the radicand lives in the owning [`QuadraticField`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticElement {
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadraticElement {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QuadraticElement { a, b }
    }

    pub fn rational(a: BigRational) -> Self {
        QuadraticElement { a, b: BigRational::zero() }
    }
}

impl QuadraticField {
    pub fn new(radicand: u64) -> Result<Self, RingError> {
        if radicand < 2 || !is_square_free(radicand) {
            return Err(RingError::InvalidParameter(format!(
                "quadratic radicand must be square-free and >= 2, got {radicand}"
            )));
        }
        Ok(QuadraticField { radicand })
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    /// `(9 - √73)/2`, the smaller root of `d² - 9d + 2`.
    pub fn critical_exponent() -> (QuadraticField, QuadraticElement) {
        let field = QuadraticField { radicand: 73 };
        let x = QuadraticElement::new(
            BigRational::new(9.into(), 2.into()),
            BigRational::new((-1).into(), 2.into()),
        );
        (field, x)
    }

    /// Norm `a² - D·b²`; nonzero for every nonzero element.
    pub fn norm(&self, x: &QuadraticElement) -> BigRational {
        &x.a * &x.a - &x.b * &x.b * BigInt::from(self.radicand)
    }

    pub fn conjugate(&self, x: &QuadraticElement) -> QuadraticElement {
        QuadraticElement::new(x.a.clone(), -&x.b)
    }
}

fn is_square_free(n: u64) -> bool {
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

impl Ring for QuadraticField {
    type Elem = QuadraticElement;

    fn tag(&self) -> &'static str {
        "quadratic"
    }

    fn describe(&self) -> String {
        format!("quadratic(D={})", self.radicand)
    }

    fn zero(&self) -> QuadraticElement {
        QuadraticElement::rational(BigRational::zero())
    }

    fn one(&self) -> QuadraticElement {
        QuadraticElement::rational(BigRational::one())
    }

    fn from_rational(&self, r: &BigRational) -> QuadraticElement {
        QuadraticElement::rational(r.clone())
    }

    fn add(&self, x: &QuadraticElement, y: &QuadraticElement) -> QuadraticElement {
        QuadraticElement::new(&x.a + &y.a, &x.b + &y.b)
    }

    fn neg(&self, x: &QuadraticElement) -> QuadraticElement {
        QuadraticElement::new(-&x.a, -&x.b)
    }

    fn sub(&self, x: &QuadraticElement, y: &QuadraticElement) -> QuadraticElement {
        QuadraticElement::new(&x.a - &y.a, &x.b - &y.b)
    }

    fn mul(&self, x: &QuadraticElement, y: &QuadraticElement) -> QuadraticElement {
        let d = BigInt::from(self.radicand);
        QuadraticElement::new(
            &x.a * &y.a + &x.b * &y.b * d,
            &x.a * &y.b + &x.b * &y.a,
        )
    }

    fn mul_int(&self, x: &QuadraticElement, n: i64) -> QuadraticElement {
        let n = BigInt::from(n);
        QuadraticElement::new(&x.a * &n, &x.b * &n)
    }

    fn div(&self, x: &QuadraticElement, y: &QuadraticElement) -> Result<QuadraticElement, RingError> {
        if self.is_zero(y) {
            return Err(RingError::DivisionByZero);
        }
        if y.b.is_zero() {
            return Ok(QuadraticElement::new(&x.a / &y.a, &x.b / &y.a));
        }
        let norm = self.norm(y);
        let num = self.mul(x, &self.conjugate(y));
        Ok(QuadraticElement::new(num.a / &norm, num.b / norm))
    }

    fn div_int(&self, x: &QuadraticElement, n: i64) -> Result<QuadraticElement, RingError> {
        if n == 0 {
            return Err(RingError::DivisionByZero);
        }
        let n = BigInt::from(n);
        Ok(QuadraticElement::new(&x.a / &n, &x.b / &n))
    }

    fn is_zero(&self, x: &QuadraticElement) -> bool {
        x.a.is_zero() && x.b.is_zero()
    }

    /// Exact sign of `a + b√D` from rational comparisons only.
    fn sign(&self, x: &QuadraticElement) -> Result<Sign, RingError> {
        let sa = Sign::of_bigint(x.a.numer());
        let sb = Sign::of_bigint(x.b.numer());
        Ok(match (sa, sb) {
            (s, Sign::Zero) | (Sign::Zero, s) => s,
            (s, t) if s == t => s,
            // opposite signs: the larger of a² and b²D wins
            (s, t) => {
                let a2 = &x.a * &x.a;
                let b2d = &x.b * &x.b * BigInt::from(self.radicand);
                if a2 > b2d {
                    s
                } else {
                    t
                }
            }
        })
    }

    fn to_json(&self, x: &QuadraticElement) -> Value {
        json!({
            "a": x.a.to_string(),
            "b": x.b.to_string(),
            "D": self.radicand,
        })
    }

    fn from_json(&self, v: &Value) -> Result<QuadraticElement, RingError> {
        let field = |k: &str| {
            v.get(k)
                .and_then(Value::as_str)
                .ok_or_else(|| RingError::Decode(format!("quadratic element missing {k:?}")))
                .and_then(parse_rational)
        };
        let radicand = v.get("D").and_then(Value::as_u64);
        if radicand != Some(self.radicand) {
            return Err(RingError::Mismatch(
                self.describe(),
                format!("quadratic(D={radicand:?})"),
            ));
        }
        Ok(QuadraticElement::new(field("a")?, field("b")?))
    }

    fn approx_f64(&self, x: &QuadraticElement) -> Option<f64> {
        Some(rational_to_f64(&x.a) + rational_to_f64(&x.b) * (self.radicand as f64).sqrt())
    }
}
