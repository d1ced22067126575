//! q-shifted factorials built as truncated series: finite products
//! `(q^s; q^M)_n`, the Borwein product `(q, q²; q³)_n`, the fractional power of
//! its infinite version, and a Jacobi triple product self-check.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::ring::{Ring, Rationals};
use crate::series::{BinomialSign, SeriesError, TruncatedSeries};

/// Residues of the Borwein product `(q, q²; q³)`.
pub const BORWEIN_RESIDUES: [usize; 2] = [1, 2];
pub const BORWEIN_MODULUS: usize = 3;

/// `(q^s; q^M)_n = ∏_{k<n} (1 - q^{s+kM})` truncated at `order`.
pub fn pochhammer_finite<R: Ring>(
    ring: &R,
    s: usize,
    modulus: usize,
    n: usize,
    order: usize,
) -> Result<TruncatedSeries<R>, SeriesError> {
    if s == 0 || modulus == 0 {
        return Err(SeriesError::InvalidArgument(format!(
            "exponent offset and modulus must be >= 1 (got s={s}, M={modulus})"
        )));
    }
    let mut f = TruncatedSeries::one(ring.clone(), order);
    for k in 0..n {
        let j = s + k * modulus;
        if j > order {
            break;
        }
        f = f.mul_binomial_factor(j, BinomialSign::Minus)?;
    }
    Ok(f)
}

/// `(q; q³)_n (q²; q³)_n` truncated at `order`.
pub fn borwein_product_finite<R: Ring>(ring: &R, n: usize, order: usize) -> Result<TruncatedSeries<R>, SeriesError> {
    borwein_finite_power(ring, n, 1, order)
}

/// Each factor `1 - q^j` applied `power` times by shifted passes; O(n·N)
/// rather than a dense product.
fn borwein_finite_power<R: Ring>(
    ring: &R,
    n: usize,
    power: usize,
    order: usize,
) -> Result<TruncatedSeries<R>, SeriesError> {
    let mut f = TruncatedSeries::one(ring.clone(), order);
    for j in (1..BORWEIN_MODULUS * n).filter(|j| j % BORWEIN_MODULUS != 0 && *j <= order) {
        for _ in 0..power {
            f = f.mul_binomial_factor(j, BinomialSign::Minus)?;
        }
    }
    Ok(f)
}

/// Degree of the polynomial `(q, q²; q³)_n`, i.e. `Σ_{k<n} (6k + 3) = 3n²`.
pub fn borwein_finite_degree(n: usize) -> usize {
    3 * n * n
}

/// `(q, q²; q³)_n²`.
pub fn borwein_product_squared_finite<R: Ring>(
    ring: &R,
    n: usize,
    order: usize,
) -> Result<TruncatedSeries<R>, SeriesError> {
    borwein_finite_power(ring, n, 2, order)
}

/// Logarithm of `∏_{s ∈ residues} (q^s; q^M)_∞` assembled term by term:
/// `log(1 - q^j) = -Σ_m q^{jm}/m` summed over every factor exponent `j`.
pub fn pochhammer_log_series(residues: &[usize], modulus: usize, order: usize) -> Result<TruncatedSeries<Rationals>, SeriesError> {
    if modulus == 0 || residues.contains(&0) {
        return Err(SeriesError::InvalidArgument("residues and modulus must be >= 1".into()));
    }
    let mut coeffs = vec![BigRational::zero(); order + 1];
    for &s in residues {
        let mut j = s;
        while j <= order {
            for m in 1..=order / j {
                coeffs[j * m] -= BigRational::new(BigInt::from(1), BigInt::from(m));
            }
            j += modulus;
        }
    }
    Ok(TruncatedSeries::from_coeffs(Rationals, coeffs))
}

/// `L = log (q, q²; q³)_∞`: coefficient of `q^t` is `-Σ 1/m` over `t = j·m`
/// with `3 ∤ j`.
pub fn borwein_log_series(order: usize) -> TruncatedSeries<Rationals> {
    pochhammer_log_series(&BORWEIN_RESIDUES, BORWEIN_MODULUS, order)
        .expect("Borwein residues are valid")
}

/// `(q, q²; q³)_∞^d = exp(d · L)` truncated at `order`.
pub fn borwein_product_fractional<R: Ring>(
    ring: &R,
    d: &R::Elem,
    order: usize,
) -> Result<TruncatedSeries<R>, SeriesError> {
    borwein_log_series(order).promote(ring).scale(d).exp()
}

/// The infinite product `∏_{j ≤ order, 3 ∤ j} (1 - q^j)` by sparse factor
/// multiplication; an independent route to `d = 1`.
pub fn borwein_product_infinite_direct<R: Ring>(ring: &R, order: usize) -> Result<TruncatedSeries<R>, SeriesError> {
    let mut f = TruncatedSeries::one(ring.clone(), order);
    for j in (1..=order).filter(|j| j % 3 != 0) {
        f = f.mul_binomial_factor(j, BinomialSign::Minus)?;
    }
    Ok(f)
}

/// Length of a product: finite `n` or the infinite product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductLength {
    Finite(usize),
    Infinite,
}

/// Everything that determines an expanded product; its canonical JSON is the
/// cache key.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSpec {
    pub residues: Vec<usize>,
    pub modulus: usize,
    pub length: ProductLength,
    /// Ring-serialized exponent.
    pub exponent: Value,
    pub order: usize,
}

pub const PRODUCT_SPEC_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ProductSpecJson {
    residues: Vec<usize>,
    modulus: usize,
    n: Value,
    d: Value,
    #[serde(rename = "N")]
    order: usize,
    version: u32,
}

impl ProductSpec {
    pub fn borwein_fractional(exponent: Value, order: usize) -> Self {
        ProductSpec {
            residues: BORWEIN_RESIDUES.to_vec(),
            modulus: BORWEIN_MODULUS,
            length: ProductLength::Infinite,
            exponent,
            order,
        }
    }

    fn raw(&self) -> ProductSpecJson {
        let n = match self.length {
            ProductLength::Finite(n) => Value::from(n),
            ProductLength::Infinite => Value::from("inf"),
        };
        ProductSpecJson {
            residues: self.residues.clone(),
            modulus: self.modulus,
            n,
            d: self.exponent.clone(),
            order: self.order,
            version: PRODUCT_SPEC_VERSION,
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self.raw()).expect("product spec serializes")
    }

    /// Compact canonical text with fields in declaration order.
    pub fn canonical_string(&self) -> String {
        serde_json::to_string(&self.raw()).expect("product spec serializes")
    }

    pub fn from_json(v: &Value) -> Result<Self, SeriesError> {
        let raw: ProductSpecJson =
            serde_json::from_value(v.clone()).map_err(|e| SeriesError::Decode(e.to_string()))?;
        if raw.version != PRODUCT_SPEC_VERSION {
            return Err(SeriesError::Decode(format!("unsupported product spec version {}", raw.version)));
        }
        let length = match &raw.n {
            Value::String(s) if s == "inf" => ProductLength::Infinite,
            Value::Number(n) => ProductLength::Finite(
                n.as_u64().ok_or_else(|| SeriesError::Decode(format!("bad n {n}")))? as usize,
            ),
            other => return Err(SeriesError::Decode(format!("bad n {other}"))),
        };
        Ok(ProductSpec { residues: raw.residues, modulus: raw.modulus, length, exponent: raw.d, order: raw.order })
    }

    /// Expand `∏_s (q^s; q^M)_n^d` in `ring`; `d` must decode from
    /// `self.exponent`.
    pub fn expand<R: Ring>(&self, ring: &R) -> Result<TruncatedSeries<R>, SeriesError> {
        let d = ring.from_json(&self.exponent)?;
        match self.length {
            ProductLength::Infinite => {
                pochhammer_log_series(&self.residues, self.modulus, self.order)?.promote(ring).scale(&d).exp()
            }
            ProductLength::Finite(n) => {
                let mut f = TruncatedSeries::one(ring.clone(), self.order);
                for &s in &self.residues {
                    f = f.mul(&pochhammer_finite(ring, s, self.modulus, n, self.order)?)?;
                }
                if ring.is_one(&d) {
                    Ok(f)
                } else {
                    f.pow(&d)
                }
            }
        }
    }
}

/// Outcome of comparing both sides of the triple product identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TripleProductReport {
    pub z: i64,
    pub order: usize,
    pub terms: usize,
    pub passed: bool,
    /// `(index, product side, sum side)` of the first disagreement.
    pub first_mismatch: Option<(usize, String, String)>,
}

/// Check `∏_{n≥1} (1 - q^{2n})(1 + z q^{2n-1})(1 + z⁻¹ q^{2n-1}) = Σ_k z^k q^{k²}`
/// through `order`, for `z = ±1`, summing `|k| <= bound`.
pub fn jacobi_triple_product_check(z: i64, order: usize, bound: usize) -> Result<TripleProductReport, SeriesError> {
    if z != 1 && z != -1 {
        return Err(SeriesError::InvalidArgument(format!("only z = 1 and z = -1 are supported, got {z}")));
    }
    if (bound + 1) * (bound + 1) <= order {
        return Err(SeriesError::InvalidArgument(format!(
            "summation bound K={bound} too small for order {order}: need (K+1)^2 > N"
        )));
    }
    let odd_sign = if z == 1 { BinomialSign::Plus } else { BinomialSign::Minus };
    let terms = order.div_ceil(2) + 1;
    let mut product = TruncatedSeries::one(Rationals, order);
    for n in 1..=terms {
        product = product.mul_binomial_factor(2 * n, BinomialSign::Minus)?;
        // z and 1/z coincide for z = ±1
        product = product.mul_binomial_factor(2 * n - 1, odd_sign)?;
        product = product.mul_binomial_factor(2 * n - 1, odd_sign)?;
    }
    let mut sum = vec![BigRational::zero(); order + 1];
    for k in -(bound as i64)..=(bound as i64) {
        let e = (k * k) as usize;
        if e <= order {
            let zk = if z == -1 && k % 2 != 0 { -1 } else { 1 };
            sum[e] += BigRational::from_integer(BigInt::from(zk));
        }
    }
    let first_mismatch = product
        .coeffs()
        .iter()
        .zip(&sum)
        .position(|(a, b)| a != b)
        .map(|i| (i, product.coeffs()[i].to_string(), sum[i].to_string()));
    Ok(TripleProductReport { z, order, terms, passed: first_mismatch.is_none(), first_mismatch })
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
    fn pochhammer_examples() {
        assert_eq!(pochhammer_finite(&Rationals, 1, 3, 1, 10).unwrap(), ints(&[1, -1], 10));
        assert_eq!(pochhammer_finite(&Rationals, 1, 3, 0, 10).unwrap(), ints(&[1], 10));
        assert_eq!(
            pochhammer_finite(&Rationals, 2, 3, 2, 10).unwrap(),
            ints(&[1, 0, -1, 0, 0, -1, 0, 1], 10)
        );
    }

    #[test]
    fn borwein_finite_examples() {
        assert_eq!(borwein_product_finite(&Rationals, 1, 3).unwrap(), ints(&[1, -1, -1, 1], 3));
        assert_eq!(
            borwein_product_finite(&Rationals, 2, 12).unwrap(),
            ints(&[1, -1, -1, 1, -1, 0, 2, 0, -1, 1, -1, -1, 1], 12)
        );
        assert_eq!(borwein_product_finite(&Rationals, 0, 5).unwrap(), ints(&[1], 5));
        assert_eq!(borwein_finite_degree(2), 12);
    }

    #[test]
    fn log_series_by_enumeration() {
        let l = borwein_log_series(6);
        assert_eq!(l.coeffs()[0], q(0, 1));
        assert_eq!(l.coeffs()[1], q(-1, 1));
        assert_eq!(l.coeffs()[2], q(-3, 2));
        assert_eq!(l.coeffs()[3], q(-1, 3));
        assert_eq!(l.coeffs()[4], q(-7, 4));
        assert_eq!(l.coeffs()[6], q(-1, 2));
    }

    #[test]
    fn log_series_matches_series_log_of_product() {
        let n = 40;
        let direct = borwein_product_infinite_direct(&Rationals, n).unwrap();
        assert_eq!(direct.log().unwrap(), borwein_log_series(n));
    }

    #[test]
    fn fractional_formal_low_coefficients() {
        let g = borwein_product_fractional(&PolyRing, &DPolynomial::indeterminate(), 3).unwrap();
        assert_eq!(g.coeffs()[1], DPolynomial::from_ints(&[0, -1]));
        assert_eq!(g.coeffs()[2], DPolynomial::new(vec![q(0, 1), q(-3, 2), q(1, 2)]));
        assert_eq!(g.coeffs()[3], DPolynomial::new(vec![q(0, 1), q(-1, 3), q(3, 2), q(-1, 6)]));
    }

    #[test]
    fn fractional_at_one_and_zero() {
        assert_eq!(
            borwein_product_fractional(&Rationals, &q(1, 1), 7).unwrap(),
            ints(&[1, -1, -1, 1, -1, 0, 2, -1], 7)
        );
        assert_eq!(borwein_product_fractional(&Rationals, &q(0, 1), 7).unwrap(), ints(&[1], 7));
    }

    #[test]
    fn squared_examples() {
        assert_eq!(
            borwein_product_squared_finite(&Rationals, 1, 6).unwrap(),
            ints(&[1, -2, -1, 4, -1, -2, 1], 6)
        );
        assert_eq!(borwein_product_squared_finite(&Rationals, 0, 4).unwrap(), ints(&[1], 4));
        assert_eq!(borwein_product_squared_finite(&Rationals, 2, 24).unwrap().coeffs()[2], q(-1, 1));
    }

    #[test]
    fn triple_product_small_cases() {
        let r = jacobi_triple_product_check(1, 4, 2).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(jacobi_triple_product_check(-1, 5, 2).unwrap().passed);
        assert!(jacobi_triple_product_check(1, 0, 0).unwrap().passed);
        assert!(jacobi_triple_product_check(1, 9, 2).is_err());
        assert!(jacobi_triple_product_check(2, 9, 5).is_err());
    }

    #[test]
    fn product_spec_json() {
        let spec = ProductSpec::borwein_fractional(Value::from("1/2"), 30);
        assert_eq!(
            spec.canonical_string(),
            r#"{"residues":[1,2],"modulus":3,"n":"inf","d":"1/2","N":30,"version":1}"#
        );
        assert_eq!(ProductSpec::from_json(&spec.to_json()).unwrap(), spec);
    }

    #[test]
    fn product_spec_expand_matches_direct_builders() {
        let spec = ProductSpec::borwein_fractional(Value::from("2/3"), 12);
        assert_eq!(
            spec.expand(&Rationals).unwrap(),
            borwein_product_fractional(&Rationals, &q(2, 3), 12).unwrap()
        );
        let finite = ProductSpec { length: ProductLength::Finite(2), exponent: Value::from("1"), ..spec };
        assert_eq!(finite.expand(&Rationals).unwrap(), borwein_product_finite(&Rationals, 2, 12).unwrap());
    }
}
