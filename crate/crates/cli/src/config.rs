//! Exponent parsing and ring selection.

use std::fmt;

use borwein_core::ring::{parse_rational, DPolynomial, IntervalField, QuadraticElement, QuadraticField, Ring};
use clap::ValueEnum;
use num_rational::BigRational;
use serde_json::Value;

pub const CRITICAL_TOKEN: &str = "critical";
pub const FORMAL_TOKEN: &str = "d";

/// Bad user input; the binary exits with status 3.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RingKind {
    Rational,
    Quadratic,
    Interval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Exponent {
    Rational(BigRational),
    /// `(9 - √73)/2`.
    Critical,
    Quadratic(QuadraticField, QuadraticElement),
    /// The indeterminate `d` itself.
    Formal,
}

impl Exponent {
    pub fn parse(s: &str) -> anyhow::Result<Self> {
        let s = s.trim();
        match s {
            CRITICAL_TOKEN => Ok(Exponent::Critical),
            FORMAL_TOKEN => Ok(Exponent::Formal),
            _ => parse_rational(s)
                .map(Exponent::Rational)
                .map_err(|_| usage(format!("cannot parse exponent {s:?}: expected p/q, a decimal, \"critical\" or \"d\""))),
        }
    }

    /// `a,b,D` meaning `a + b·√D`.
    pub fn parse_quadratic(s: &str) -> anyhow::Result<Self> {
        let bad = || usage(format!("quadratic exponent must be a,b,D (a + b*sqrt(D)), got {s:?}"));
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [a, b, radicand] = parts[..] else { return Err(bad()) };
        let a = parse_rational(a).map_err(|_| bad())?;
        let b = parse_rational(b).map_err(|_| bad())?;
        let radicand: u64 = radicand.parse().map_err(|_| bad())?;
        let field = QuadraticField::new(radicand).map_err(|e| usage(e.to_string()))?;
        Ok(Exponent::Quadratic(field, QuadraticElement::new(a, b)))
    }

    pub fn label(&self) -> String {
        match self {
            Exponent::Rational(r) => r.to_string(),
            Exponent::Critical => CRITICAL_TOKEN.to_string(),
            Exponent::Quadratic(k, x) => format!("{} + {}*sqrt({})", x.a, x.b, k.radicand()),
            Exponent::Formal => FORMAL_TOKEN.to_string(),
        }
    }
}

/// An exponent placed in the ring it will be computed in.
#[derive(Debug, Clone)]
pub enum Resolved {
    Rational(BigRational),
    Quadratic(QuadraticField, QuadraticElement),
    Interval(IntervalField, BigRational),
    Formal,
}

impl Resolved {
    pub fn new(exponent: &Exponent, ring: Option<RingKind>, bits: u32) -> anyhow::Result<Self> {
        let interval = || IntervalField::new(bits).map_err(|e| usage(e.to_string()));
        match (exponent, ring) {
            (Exponent::Rational(r), None | Some(RingKind::Rational)) => Ok(Resolved::Rational(r.clone())),
            (Exponent::Rational(r), Some(RingKind::Quadratic)) => {
                let (k, _) = QuadraticField::critical_exponent();
                Ok(Resolved::Quadratic(k, QuadraticElement::rational(r.clone())))
            }
            (Exponent::Rational(r), Some(RingKind::Interval)) => Ok(Resolved::Interval(interval()?, r.clone())),
            (Exponent::Critical, None | Some(RingKind::Quadratic)) => {
                let (k, x) = QuadraticField::critical_exponent();
                Ok(Resolved::Quadratic(k, x))
            }
            (Exponent::Quadratic(k, x), None | Some(RingKind::Quadratic)) => Ok(Resolved::Quadratic(*k, x.clone())),
            (Exponent::Critical | Exponent::Quadratic(..), Some(other)) => Err(usage(format!(
                "a quadratic irrational exponent needs the quadratic ring, not --ring {}",
                other.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
            ))),
            (Exponent::Formal, None) => Ok(Resolved::Formal),
            (Exponent::Formal, Some(_)) => Err(usage("the formal exponent d always uses the polynomial ring; drop --ring")),
        }
    }
}

/// `lo:hi:count`, `count` evenly spaced rationals including both ends.
pub fn parse_grid(s: &str) -> anyhow::Result<Vec<BigRational>> {
    let bad = || usage(format!("grid must be lo:hi:count, got {s:?}"));
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    let [lo, hi, count] = parts[..] else { return Err(bad()) };
    let lo = parse_rational(lo).map_err(|_| bad())?;
    let hi = parse_rational(hi).map_err(|_| bad())?;
    let count: usize = count.parse().map_err(|_| bad())?;
    match count {
        0 => Err(usage("grid is empty (count = 0)")),
        1 => Ok(vec![lo]),
        _ => {
            let step = (&hi - &lo) / BigRational::from_integer((count - 1).into());
            Ok((0..count).map(|i| &lo + &step * BigRational::from_integer(i.into())).collect())
        }
    }
}

/// Human-readable rendering of a ring element.
pub fn display_elem<R: Ring>(ring: &R, x: &R::Elem) -> String {
    display_json(&ring.to_json(x))
}

/// Human-readable rendering of a ring-serialized value.
pub fn display_json(v: &Value) -> String {
    let field = |m: &serde_json::Map<String, Value>, k: &str| m.get(k).and_then(Value::as_str).unwrap_or_default().to_string();
    match v {
        Value::String(s) => s.clone(),
        Value::Array(_) => DPolynomial::from_json(v).map(|p| p.to_string()).unwrap_or_else(|_| v.to_string()),
        Value::Object(m) if m.contains_key("D") => {
            if field(m, "b") == "0" {
                field(m, "a")
            } else {
                format!("{} + {}*sqrt({})", field(m, "a"), field(m, "b"), m["D"])
            }
        }
        Value::Object(m) if m.contains_key("lo") => format!("[{}, {}]", field(m, "lo"), field(m, "hi")),
        _ => v.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn exponents() {
        assert_eq!(Exponent::parse("1/5").unwrap(), Exponent::Rational(q(1, 5)));
        assert_eq!(Exponent::parse("0.23").unwrap(), Exponent::Rational(q(23, 100)));
        assert_eq!(Exponent::parse("-2").unwrap(), Exponent::Rational(q(-2, 1)));
        assert_eq!(Exponent::parse("critical").unwrap(), Exponent::Critical);
        assert_eq!(Exponent::parse("d").unwrap(), Exponent::Formal);
        assert!(Exponent::parse("sqrt73").unwrap_err().is::<UsageError>());
        assert!(Exponent::parse("1/0").is_err());
    }

    #[test]
    fn quadratic_triples() {
        let Exponent::Quadratic(k, x) = Exponent::parse_quadratic("9/2,-1/2,73").unwrap() else { panic!() };
        assert_eq!((k, x), QuadraticField::critical_exponent());
        assert!(Exponent::parse_quadratic("1,2").is_err());
        assert!(Exponent::parse_quadratic("1,2,4").is_err());
    }

    #[test]
    fn ring_resolution() {
        let crit = Exponent::Critical;
        assert!(matches!(Resolved::new(&crit, None, 128).unwrap(), Resolved::Quadratic(..)));
        assert!(Resolved::new(&crit, Some(RingKind::Rational), 128).is_err());
        assert!(Resolved::new(&crit, Some(RingKind::Interval), 128).is_err());
        let half = Exponent::Rational(q(1, 2));
        assert!(matches!(Resolved::new(&half, Some(RingKind::Interval), 64).unwrap(), Resolved::Interval(..)));
        assert!(Resolved::new(&half, Some(RingKind::Interval), 4).is_err());
        assert!(matches!(Resolved::new(&half, Some(RingKind::Quadratic), 128).unwrap(), Resolved::Quadratic(..)));
        assert!(Resolved::new(&Exponent::Formal, Some(RingKind::Rational), 128).is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:1:3").unwrap(), vec![q(0, 1), q(1, 2), q(1, 1)]);
        assert_eq!(parse_grid("1/4:1/4:1").unwrap(), vec![q(1, 4)]);
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn element_display() {
        let (k, x) = QuadraticField::critical_exponent();
        assert_eq!(display_elem(&k, &x), "9/2 + -1/2*sqrt(73)");
        assert_eq!(display_elem(&k, &QuadraticElement::rational(q(3, 1))), "3");
        assert_eq!(display_elem(&borwein_core::ring::Rationals, &q(-1, 125)), "-1/125");
    }
}
