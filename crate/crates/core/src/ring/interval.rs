use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::{parse_rational, rational_to_f64, Nonnegativity, Ring, RingError, Sign};

pub const DEFAULT_BITS: u32 = 128;
pub const MAX_BITS: u32 = 1024;
const MIN_BITS: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Round {
    Down,
    Up,
}

/// An exact binary float `mantissa · 2^exponent`, normalised so the mantissa
/// is odd (or the value is `0 · 2^0`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        if mantissa.is_zero() {
            return Dyadic { mantissa, exponent: 0 };
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        Dyadic { mantissa: mantissa >> tz as usize, exponent: exponent + tz as i64 }
    }

    pub fn zero() -> Self {
        Dyadic::new(BigInt::zero(), 0)
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic::new(BigInt::from(n), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn signum(&self) -> Sign {
        Sign::of_bigint(&self.mantissa)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exponent >= 0 {
            BigRational::from_integer(&self.mantissa << self.exponent as usize)
        } else {
            BigRational::new(self.mantissa.clone(), BigInt::one() << (-self.exponent) as usize)
        }
    }

    fn neg(&self) -> Self {
        Dyadic { mantissa: -&self.mantissa, exponent: self.exponent }
    }

    fn add(&self, other: &Self) -> Self {
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as usize;
        let b = &other.mantissa << (other.exponent - e) as usize;
        Dyadic::new(a + b, e)
    }

    fn mul(&self, other: &Self) -> Self {
        Dyadic::new(&self.mantissa * &other.mantissa, self.exponent + other.exponent)
    }

    /// Round to at most `bits` significant bits in the given direction.
    fn round(&self, bits: u32, dir: Round) -> Self {
        let len = self.mantissa.bits();
        if len <= bits as u64 {
            return self.clone();
        }
        let shift = (len - bits as u64) as usize;
        let m = div_directed(&self.mantissa, &(BigInt::one() << shift), dir);
        Dyadic::new(m, self.exponent + shift as i64)
    }

    /// `num / den` rounded to `bits` significant bits.
    fn quotient(num: &BigInt, den: &BigInt, exponent: i64, bits: u32, dir: Round) -> Self {
        // scale so the integer quotient carries more than `bits` bits
        let want = bits as i64 + 2 + den.bits() as i64 - num.bits() as i64;
        let shift = want.max(0) as usize;
        let q = div_directed(&(num << shift), den, dir);
        Dyadic::new(q, exponent - shift as i64).round(bits, dir)
    }

    fn from_rational(r: &BigRational, bits: u32, dir: Round) -> Self {
        Dyadic::quotient(r.numer(), r.denom(), 0, bits, dir)
    }

    fn div(&self, other: &Self, bits: u32, dir: Round) -> Self {
        // the divisor mantissa may be negative; move its sign to the numerator
        let (num, den) = if other.mantissa.is_negative() {
            (-&self.mantissa, -&other.mantissa)
        } else {
            (self.mantissa.clone(), other.mantissa.clone())
        };
        Dyadic::quotient(&num, &den, self.exponent - other.exponent, bits, dir)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.add(&other.neg()).signum() {
            Sign::Negative => Ordering::Less,
            Sign::Positive => Ordering::Greater,
            _ => Ordering::Equal,
        }
    }
}

fn div_directed(num: &BigInt, den: &BigInt, dir: Round) -> BigInt {
    match dir {
        Round::Down => num.div_floor(den),
        Round::Up => -((-num).div_floor(den)),
    }
}

/// A closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntervalValue {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl IntervalValue {
    pub fn point(x: Dyadic) -> Self {
        IntervalValue { lo: x.clone(), hi: x }
    }

    /// Fails unless `lo <= hi`.
    pub fn new(lo: Dyadic, hi: Dyadic) -> Result<Self, RingError> {
        if lo > hi {
            return Err(RingError::InvalidParameter(format!(
                "interval lower bound {} exceeds upper bound {}",
                lo.to_rational(),
                hi.to_rational()
            )));
        }
        Ok(IntervalValue { lo, hi })
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        self.lo.to_rational() <= *r && *r <= self.hi.to_rational()
    }

    pub fn width(&self) -> BigRational {
        self.hi.add(&self.lo.neg()).to_rational()
    }
}

/// Outward-rounded interval arithmetic at a fixed number of mantissa bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntervalField {
    bits: u32,
}

impl Default for IntervalField {
    fn default() -> Self {
        IntervalField { bits: DEFAULT_BITS }
    }
}

impl IntervalField {
    pub fn new(bits: u32) -> Result<Self, RingError> {
        if !(MIN_BITS..=MAX_BITS).contains(&bits) {
            return Err(RingError::InvalidParameter(format!(
                "interval precision must be in {MIN_BITS}..={MAX_BITS} bits, got {bits}"
            )));
        }
        Ok(IntervalField { bits })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// The next precision to try after an inconclusive run, if any.
    pub fn escalated(&self) -> Option<IntervalField> {
        (self.bits < MAX_BITS).then(|| IntervalField { bits: (self.bits * 2).min(MAX_BITS) })
    }

    fn outward(&self, lo: Dyadic, hi: Dyadic) -> IntervalValue {
        IntervalValue { lo: lo.round(self.bits, Round::Down), hi: hi.round(self.bits, Round::Up) }
    }

    fn contains_zero(x: &IntervalValue) -> bool {
        x.lo.signum() != Sign::Positive && x.hi.signum() != Sign::Negative
    }
}

impl Ring for IntervalField {
    type Elem = IntervalValue;

    fn tag(&self) -> &'static str {
        "interval"
    }

    fn describe(&self) -> String {
        format!("interval({} bits)", self.bits)
    }

    fn zero(&self) -> IntervalValue {
        IntervalValue::point(Dyadic::zero())
    }

    fn one(&self) -> IntervalValue {
        IntervalValue::point(Dyadic::from_int(1))
    }

    fn from_rational(&self, r: &BigRational) -> IntervalValue {
        IntervalValue {
            lo: Dyadic::from_rational(r, self.bits, Round::Down),
            hi: Dyadic::from_rational(r, self.bits, Round::Up),
        }
    }

    fn add(&self, x: &IntervalValue, y: &IntervalValue) -> IntervalValue {
        self.outward(x.lo.add(&y.lo), x.hi.add(&y.hi))
    }

    fn neg(&self, x: &IntervalValue) -> IntervalValue {
        IntervalValue { lo: x.hi.neg(), hi: x.lo.neg() }
    }

    fn mul(&self, x: &IntervalValue, y: &IntervalValue) -> IntervalValue {
        let products = [x.lo.mul(&y.lo), x.lo.mul(&y.hi), x.hi.mul(&y.lo), x.hi.mul(&y.hi)];
        let lo = products.iter().min().cloned().unwrap_or_else(Dyadic::zero);
        let hi = products.iter().max().cloned().unwrap_or_else(Dyadic::zero);
        self.outward(lo, hi)
    }

    fn div(&self, x: &IntervalValue, y: &IntervalValue) -> Result<IntervalValue, RingError> {
        if Self::contains_zero(y) {
            return Err(RingError::DivisorStraddlesZero {
                lo: y.lo.to_rational().to_string(),
                hi: y.hi.to_rational().to_string(),
            });
        }
        let pairs = [(&x.lo, &y.lo), (&x.lo, &y.hi), (&x.hi, &y.lo), (&x.hi, &y.hi)];
        let lo = pairs.iter().map(|(a, b)| a.div(b, self.bits, Round::Down)).min();
        let hi = pairs.iter().map(|(a, b)| a.div(b, self.bits, Round::Up)).max();
        Ok(IntervalValue { lo: lo.unwrap_or_else(Dyadic::zero), hi: hi.unwrap_or_else(Dyadic::zero) })
    }

    fn is_zero(&self, x: &IntervalValue) -> bool {
        x.lo.is_zero() && x.hi.is_zero()
    }

    /// `Unknown` whenever the interval touches zero without being `[0, 0]`.
    fn sign(&self, x: &IntervalValue) -> Result<Sign, RingError> {
        Ok(match (x.lo.signum(), x.hi.signum()) {
            (Sign::Positive, _) => Sign::Positive,
            (_, Sign::Negative) => Sign::Negative,
            (Sign::Zero, Sign::Zero) => Sign::Zero,
            _ => Sign::Unknown,
        })
    }

    fn nonnegativity(&self, x: &IntervalValue) -> Result<Nonnegativity, RingError> {
        Ok(if x.hi.signum() == Sign::Negative {
            Nonnegativity::Violated
        } else if x.lo.signum() != Sign::Negative {
            Nonnegativity::Holds
        } else {
            Nonnegativity::Unknown
        })
    }

    fn to_json(&self, x: &IntervalValue) -> Value {
        json!({
            "lo": x.lo.to_rational().to_string(),
            "hi": x.hi.to_rational().to_string(),
            "bits": self.bits,
        })
    }

    fn from_json(&self, v: &Value) -> Result<IntervalValue, RingError> {
        let end = |k: &str| -> Result<Dyadic, RingError> {
            let r = v
                .get(k)
                .and_then(Value::as_str)
                .ok_or_else(|| RingError::Decode(format!("interval missing {k:?}")))
                .and_then(parse_rational)?;
            let exact = Dyadic::from_rational(&r, MAX_BITS * 4, Round::Down);
            if exact.to_rational() != r {
                return Err(RingError::Decode(format!("interval endpoint {r} is not dyadic")));
            }
            Ok(exact)
        };
        let bits = v.get("bits").and_then(Value::as_u64);
        if bits != Some(self.bits as u64) {
            return Err(RingError::Mismatch(self.describe(), format!("interval({bits:?} bits)")));
        }
        IntervalValue::new(end("lo")?, end("hi")?)
    }

    fn approx_f64(&self, x: &IntervalValue) -> Option<f64> {
        let mid = (x.lo.to_rational() + x.hi.to_rational()) / BigInt::from(2);
        Some(rational_to_f64(&mid))
    }
}
