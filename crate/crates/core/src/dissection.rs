//! m-dissections of a series and coefficient nonnegativity verdicts.
//!
//! The Borwein convention writes `f(q) = A(q³) - q·B(q³) - q²·C(q³)`, i.e. the
//! sign pattern `(+, -, -)`.

use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::qproducts::{
    borwein_finite_degree, borwein_product_finite, borwein_product_fractional, borwein_product_squared_finite,
};
use crate::ring::{IntervalField, Nonnegativity, Rationals, Ring, RingError};
use crate::series::{SeriesError, TruncatedSeries};

pub const BORWEIN_SIGNS: [i8; 3] = [1, -1, -1];
pub const REPORT_VERSION: u32 = 1;

fn check_signs(m: usize, signs: &[i8]) -> Result<(), SeriesError> {
    if m == 0 {
        return Err(SeriesError::InvalidArgument("dissection modulus must be >= 1".into()));
    }
    if signs.len() != m || signs.iter().any(|&s| s != 1 && s != -1) {
        return Err(SeriesError::InvalidArgument(format!(
            "sign pattern must have {m} entries of +1/-1, got {signs:?}"
        )));
    }
    Ok(())
}

/// Component `r` holds `signs[r] · f_{mk+r}` at index `k`.
pub fn dissect<R: Ring>(f: &TruncatedSeries<R>, m: usize, signs: &[i8]) -> Result<Vec<TruncatedSeries<R>>, SeriesError> {
    check_signs(m, signs)?;
    let ring = f.ring();
    Ok(signs
        .iter()
        .enumerate()
        .map(|(r, &s)| {
            let coeffs = f
                .coeffs()
                .iter()
                .skip(r)
                .step_by(m)
                .map(|c| if s < 0 { ring.neg(c) } else { c.clone() })
                .collect();
            TruncatedSeries::from_coeffs(ring.clone(), coeffs)
        })
        .collect())
}

/// Inverse of [`dissect`]: `Σ_r signs[r] · q^r · component_r(q^m)` through
/// `order`.
pub fn reassemble<R: Ring>(
    components: &[TruncatedSeries<R>],
    signs: &[i8],
    order: usize,
) -> Result<TruncatedSeries<R>, SeriesError> {
    let m = components.len();
    check_signs(m, signs)?;
    let ring = components[0].ring().clone();
    let mut coeffs = vec![ring.zero(); order + 1];
    for (r, (comp, &s)) in components.iter().zip(signs).enumerate() {
        ring.check_same(comp.ring())?;
        for (k, c) in comp.coeffs().iter().enumerate() {
            let idx = m * k + r;
            if idx > order {
                break;
            }
            coeffs[idx] = if s < 0 { ring.neg(c) } else { c.clone() };
        }
        let needed = order.checked_sub(r).map(|x| x / m + 1).unwrap_or(0);
        if comp.len() < needed {
            return Err(SeriesError::InvalidArgument(format!(
                "component {r} has {} coefficients, {needed} needed for order {order}",
                comp.len()
            )));
        }
    }
    Ok(TruncatedSeries::from_coeffs(ring, coeffs))
}

/// `(A, B, C)` with `f = A(q³) - q B(q³) - q² C(q³)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dissection3<R: Ring> {
    pub a: TruncatedSeries<R>,
    pub b: TruncatedSeries<R>,
    pub c: TruncatedSeries<R>,
    pub source_order: usize,
}

impl<R: Ring> Dissection3<R> {
    pub fn borwein(f: &TruncatedSeries<R>) -> Result<Self, SeriesError> {
        let source_order = f
            .order()
            .ok_or_else(|| SeriesError::InvalidArgument("cannot dissect an empty series".into()))?;
        let mut parts = dissect(f, 3, &BORWEIN_SIGNS)?.into_iter();
        let (a, b, c) = (parts.next().unwrap(), parts.next().unwrap(), parts.next().unwrap());
        Ok(Dissection3 { a, b, c, source_order })
    }

    pub fn components(&self) -> [(&'static str, &TruncatedSeries<R>); 3] {
        [("A", &self.a), ("B", &self.b), ("C", &self.c)]
    }

    pub fn reassemble(&self) -> Result<TruncatedSeries<R>, SeriesError> {
        reassemble(&[self.a.clone(), self.b.clone(), self.c.clone()], &BORWEIN_SIGNS, self.source_order)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    VerifiedNonnegative,
    Inconclusive,
    Violation,
}

impl Status {
    /// 0 verified, 1 violation, 2 inconclusive.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::VerifiedNonnegative => 0,
            Status::Violation => 1,
            Status::Inconclusive => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::VerifiedNonnegative => "verified-nonnegative",
            Status::Inconclusive => "inconclusive",
            Status::Violation => "violation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ComponentVerdict {
    pub first_violation: Option<usize>,
    /// Exact ring-serialized value of the first negative coefficient.
    pub witness: Option<Value>,
    /// First index whose sign could not be decided (interval ring only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_unknown: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct ComponentVerdicts {
    pub A: ComponentVerdict,
    pub B: ComponentVerdict,
    pub C: ComponentVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub version: u32,
    pub status: Status,
    pub params: Value,
    pub checked_order: usize,
    pub ring: String,
    pub components: ComponentVerdicts,
}

impl VerificationReport {
    pub fn with_params(mut self, params: Value) -> Self {
        self.params = params;
        self
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn violations(&self) -> impl Iterator<Item = (&'static str, &ComponentVerdict)> {
        [("A", &self.components.A), ("B", &self.components.B), ("C", &self.components.C)]
            .into_iter()
            .filter(|(_, v)| v.first_violation.is_some())
    }
}

fn scan_component<R: Ring>(s: &TruncatedSeries<R>) -> Result<ComponentVerdict, RingError> {
    let ring = s.ring();
    let mut verdict = ComponentVerdict::default();
    for (k, c) in s.coeffs().iter().enumerate() {
        match ring.nonnegativity(c)? {
            Nonnegativity::Holds => {}
            Nonnegativity::Violated => {
                verdict.first_violation = Some(k);
                verdict.witness = Some(ring.to_json(c));
                break;
            }
            Nonnegativity::Unknown => {
                verdict.first_unknown.get_or_insert(k);
            }
        }
    }
    Ok(verdict)
}

/// Scan all of `A`, `B`, `C`; the smallest certainly-negative index per
/// component is reported with its exact value.
pub fn verify_nonnegative<R: Ring>(d: &Dissection3<R>) -> Result<VerificationReport, SeriesError> {
    let ring = d.a.ring();
    // rings without a sign query (formal d) are rejected even for empty input
    ring.sign(&ring.zero())?;
    let a = scan_component(&d.a)?;
    let b = scan_component(&d.b)?;
    let c = scan_component(&d.c)?;
    let all = [&a, &b, &c];
    let status = if all.iter().any(|v| v.first_violation.is_some()) {
        Status::Violation
    } else if all.iter().any(|v| v.first_unknown.is_some()) {
        Status::Inconclusive
    } else {
        Status::VerifiedNonnegative
    };
    Ok(VerificationReport {
        version: REPORT_VERSION,
        status,
        params: Value::Null,
        checked_order: d.source_order,
        ring: ring.tag().to_string(),
        components: ComponentVerdicts { A: a, B: b, C: c },
    })
}

/// Dissect `(q, q²; q³)_∞^d` at `order` and verify the components.
pub fn verify_fractional<R: Ring>(ring: &R, d: &R::Elem, order: usize) -> Result<VerificationReport, SeriesError> {
    let f = borwein_product_fractional(ring, d, order)?;
    let report = verify_nonnegative(&Dissection3::borwein(&f)?)?;
    Ok(report.with_params(json!({
        "product": "(q,q^2;q^3)_inf^d",
        "d": ring.to_json(d),
    })))
}

/// Interval verification at a rational `d`, retried once at doubled precision
/// when the first pass is inconclusive.
pub fn verify_fractional_interval(
    field: IntervalField,
    d: &BigRational,
    order: usize,
) -> Result<VerificationReport, SeriesError> {
    let run = |k: IntervalField| -> Result<VerificationReport, SeriesError> {
        let x = k.from_rational(d);
        let report = verify_fractional(&k, &x, order)?;
        Ok(report.with_params(json!({
            "product": "(q,q^2;q^3)_inf^d",
            "d": d.to_string(),
            "d_enclosure": k.to_json(&x),
            "bits": k.bits(),
        })))
    };
    let first = run(field)?;
    match (first.status, field.escalated()) {
        (Status::Inconclusive, Some(higher)) => run(higher),
        _ => Ok(first),
    }
}

/// First (or, with `squared`, Second) Borwein polynomial case at `n`, built
/// to its full degree and checked exactly.
pub fn verify_finite_borwein(n: usize, squared: bool) -> Result<VerificationReport, SeriesError> {
    let degree = if squared { 2 * borwein_finite_degree(n) } else { borwein_finite_degree(n) };
    // at least one coefficient per component, so n = 0 gives A = 1, B = C = 0
    let order = degree.max(2);
    let f = if squared {
        borwein_product_squared_finite(&Rationals, n, order)?
    } else {
        borwein_product_finite(&Rationals, n, order)?
    };
    let report = verify_nonnegative(&Dissection3::borwein(&f)?)?;
    Ok(report.with_params(json!({
        "product": if squared { "(q,q^2;q^3)_n^2" } else { "(q,q^2;q^3)_n" },
        "n": n,
        "squared": squared,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{DPolynomial, PolyRing};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ints(c: &[i64], order: usize) -> TruncatedSeries<Rationals> {
        TruncatedSeries::from_ints(Rationals, c, order)
    }

    #[test]
    fn index_bookkeeping() {
        let parts = dissect(&ints(&[1, 2, 3, 4, 5, 6], 5), 3, &BORWEIN_SIGNS).unwrap();
        assert_eq!(parts[0], ints(&[1, 4], 1));
        assert_eq!(parts[1], ints(&[-2, -5], 1));
        assert_eq!(parts[2], ints(&[-3, -6], 1));
    }

    #[test]
    fn first_borwein_polynomial_n1() {
        let d = Dissection3::borwein(&borwein_product_finite(&Rationals, 1, 3).unwrap()).unwrap();
        assert_eq!(d.a, ints(&[1, 1], 1));
        assert_eq!(d.b, ints(&[1], 0));
        assert_eq!(d.c, ints(&[1], 0));
    }

    #[test]
    fn identity_dissection() {
        let f = ints(&[4, -1, 7], 2);
        assert_eq!(dissect(&f, 1, &[1]).unwrap(), vec![f]);
    }

    #[test]
    fn bad_sign_patterns() {
        let f = ints(&[1], 3);
        assert!(dissect(&f, 3, &[1, -1]).is_err());
        assert!(dissect(&f, 2, &[1, 2]).is_err());
        assert!(dissect(&f, 0, &[]).is_err());
    }

    #[test]
    fn component_orders() {
        for n in 0..8 {
            let d = Dissection3::borwein(&ints(&[1], n)).unwrap();
            assert_eq!(d.a.len(), n / 3 + 1);
            assert_eq!(d.b.len(), n.div_ceil(3));
            assert_eq!(d.c.len(), (n + 1) / 3);
            assert_eq!(d.reassemble().unwrap(), ints(&[1], n));
        }
    }

    #[test]
    fn d_one_verified() {
        let r = verify_fractional(&Rationals, &q(1, 1), 200).unwrap();
        assert_eq!(r.status, Status::VerifiedNonnegative);
        assert_eq!(r.checked_order, 200);
    }

    #[test]
    fn one_fifth_violates_at_q_cubed() {
        let r = verify_fractional(&Rationals, &q(1, 5), 3).unwrap();
        assert_eq!(r.status, Status::Violation);
        assert_eq!(r.components.A.first_violation, Some(1));
        // (d/6)(-d² + 9d - 2) at d = 1/5
        let d = q(1, 5);
        let expect = &d / q(6, 1) * (-&d * &d + q(9, 1) * &d - q(2, 1));
        assert_eq!(r.components.A.witness, Some(Value::String(expect.to_string())));
        assert_eq!(r.components.B.first_violation, None);
    }

    #[test]
    fn zero_series_is_nonnegative() {
        let d = Dissection3::borwein(&ints(&[], 9)).unwrap();
        assert_eq!(verify_nonnegative(&d).unwrap().status, Status::VerifiedNonnegative);
    }

    #[test]
    fn formal_ring_is_rejected() {
        let f = TruncatedSeries::one(PolyRing, 3).scale(&DPolynomial::indeterminate());
        let d = Dissection3::borwein(&f).unwrap();
        assert!(matches!(verify_nonnegative(&d), Err(SeriesError::Ring(RingError::UnsupportedSign(_)))));
    }

    #[test]
    fn finite_examples() {
        let r = verify_finite_borwein(2, false).unwrap();
        assert_eq!(r.status, Status::VerifiedNonnegative);
        let f = borwein_product_finite(&Rationals, 2, 12).unwrap();
        let d = Dissection3::borwein(&f).unwrap();
        assert_eq!(d.a, ints(&[1, 1, 2, 1, 1], 4));
        assert_eq!(d.b, ints(&[1, 1, 0, 1], 3));
        assert_eq!(d.c, ints(&[1, 0, 1, 1], 3));

        let r0 = verify_finite_borwein(0, false).unwrap();
        assert_eq!(r0.status, Status::VerifiedNonnegative);
        assert_eq!(r0.checked_order, 2);

        let sq = borwein_product_squared_finite(&Rationals, 1, 6).unwrap();
        let d = Dissection3::borwein(&sq).unwrap();
        assert_eq!(d.a, ints(&[1, 4, 1], 2));
        assert_eq!(d.b, ints(&[2, 1], 1));
        assert_eq!(d.c, ints(&[1, 2], 1));
        assert_eq!(verify_finite_borwein(1, true).unwrap().status, Status::VerifiedNonnegative);
    }

    #[test]
    fn interval_ring_agrees_with_exact_away_from_zero_coefficients() {
        // d = 1/2: coefficients are nonzero, so the enclosure decides
        let r = verify_fractional_interval(IntervalField::default(), &q(1, 2), 60).unwrap();
        let exact = verify_fractional(&Rationals, &q(1, 2), 60).unwrap();
        assert_eq!(exact.status, Status::VerifiedNonnegative);
        assert_eq!(r.status, Status::VerifiedNonnegative);
        let bad = verify_fractional_interval(IntervalField::default(), &q(1, 5), 10).unwrap();
        assert_eq!(bad.status, Status::Violation);
        assert_eq!(bad.components.A.first_violation, Some(1));
    }

    #[test]
    fn interval_ring_is_inconclusive_on_exact_zeros() {
        // d = 1 has vanishing coefficients (q^5), which intervals cannot certify
        let r = verify_fractional_interval(IntervalField::new(64).unwrap(), &q(1, 1), 12).unwrap();
        assert_eq!(r.status, Status::Inconclusive);
        assert_eq!(r.params["bits"], json!(128));
    }

    #[test]
    fn status_severity() {
        assert!(Status::VerifiedNonnegative < Status::Inconclusive);
        assert!(Status::Inconclusive < Status::Violation);
        assert_eq!(serde_json::to_value(Status::VerifiedNonnegative).unwrap(), json!("verified-nonnegative"));
    }

    #[test]
    fn report_schema() {
        let r = verify_finite_borwein(1, false).unwrap().to_json();
        for key in ["version", "status", "params", "checked_order", "ring", "components"] {
            assert!(r.get(key).is_some(), "{key}");
        }
        assert_eq!(r["components"]["A"], json!({"first_violation": null, "witness": null}));
    }
}
