//! Dense truncated power series in `q` over a coefficient [`Ring`].
//!
//! A series with `len` stored coefficients is known modulo `q^len`; its
//! truncation order is `len - 1`. Binary operations keep the smaller order and
//! never zero-extend an operand.

use num_rational::BigRational;
use serde_json::{json, Value};
use thiserror::Error;

use crate::ring::{Ring, RingError, Rationals};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("constant term must be {expected}")]
    ConstantTerm { expected: &'static str },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed series json: {0}")]
    Decode(String),
}

/// Which binomial factor [`TruncatedSeries::mul_binomial_factor`] applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinomialSign {
    /// `1 - q^j`
    Minus,
    /// `1 + q^j`
    Plus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<R: Ring> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> TruncatedSeries<R> {
    /// Wraps `order + 1` coefficients. An empty vector is a series with no
    /// certified coefficients (what a dissection component becomes when its
    /// residue exceeds the source order).
    pub fn from_coeffs(ring: R, coeffs: Vec<R::Elem>) -> Self {
        TruncatedSeries { ring, coeffs }
    }

    pub fn zero(ring: R, order: usize) -> Self {
        let coeffs = vec![ring.zero(); order + 1];
        TruncatedSeries { ring, coeffs }
    }

    pub fn one(ring: R, order: usize) -> Self {
        let mut s = Self::zero(ring, order);
        s.coeffs[0] = s.ring.one();
        s
    }

    /// A polynomial given by integer coefficients, truncated or padded to
    /// `order`.
    pub fn from_ints(ring: R, coeffs: &[i64], order: usize) -> Self {
        let coeffs = (0..=order)
            .map(|k| ring.from_int(coeffs.get(k).copied().unwrap_or(0)))
            .collect();
        TruncatedSeries { ring, coeffs }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    /// `None` for a series with no coefficients.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R::Elem> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Option<&R::Elem> {
        self.coeffs.get(k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.ring.is_zero(c))
    }

    /// Keep coefficients up to `order` (no-op when already shorter).
    pub fn truncate(&self, order: usize) -> Self {
        let n = self.coeffs.len().min(order + 1);
        TruncatedSeries { ring: self.ring.clone(), coeffs: self.coeffs[..n].to_vec() }
    }

    fn common_len(&self, other: &Self) -> Result<usize, SeriesError> {
        self.ring.check_same(&other.ring)?;
        Ok(self.coeffs.len().min(other.coeffs.len()))
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        let n = self.common_len(other)?;
        let coeffs = (0..n).map(|k| self.ring.add(&self.coeffs[k], &other.coeffs[k])).collect();
        Ok(TruncatedSeries { ring: self.ring.clone(), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        let n = self.common_len(other)?;
        let coeffs = (0..n).map(|k| self.ring.sub(&self.coeffs[k], &other.coeffs[k])).collect();
        Ok(TruncatedSeries { ring: self.ring.clone(), coeffs })
    }

    pub fn neg(&self) -> Self {
        self.map(|r, c| r.neg(c))
    }

    pub fn scale(&self, s: &R::Elem) -> Self {
        self.map(|r, c| r.mul(c, s))
    }

    fn map(&self, f: impl Fn(&R, &R::Elem) -> R::Elem) -> Self {
        let coeffs = self.coeffs.iter().map(|c| f(&self.ring, c)).collect();
        TruncatedSeries { ring: self.ring.clone(), coeffs }
    }

    /// Cauchy product truncated to the smaller order.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        let n = self.common_len(other)?;
        let r = &self.ring;
        let mut coeffs = vec![r.zero(); n];
        for (i, a) in self.coeffs[..n].iter().enumerate() {
            if r.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs[..n - i].iter().enumerate() {
                if !r.is_zero(b) {
                    coeffs[i + j] = r.add(&coeffs[i + j], &r.mul(a, b));
                }
            }
        }
        Ok(TruncatedSeries { ring: r.clone(), coeffs })
    }

    /// `f · (1 ∓ q^j)` by one shifted pass; O(N).
    pub fn mul_binomial_factor(&self, j: usize, sign: BinomialSign) -> Result<Self, SeriesError> {
        if j == 0 {
            return Err(SeriesError::InvalidArgument("binomial factor exponent must be >= 1".into()));
        }
        let r = &self.ring;
        let mut coeffs = self.coeffs.clone();
        for k in (j..coeffs.len()).rev() {
            let shifted = &self.coeffs[k - j];
            coeffs[k] = match sign {
                BinomialSign::Minus => r.sub(&coeffs[k], shifted),
                BinomialSign::Plus => r.add(&coeffs[k], shifted),
            };
        }
        Ok(TruncatedSeries { ring: r.clone(), coeffs })
    }

    /// Formal derivative; the order drops by one.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| self.ring.mul_int(c, k as i64))
            .collect();
        TruncatedSeries { ring: self.ring.clone(), coeffs }
    }

    /// The substitution `q -> q^m`; order `m·N`.
    pub fn inflate(&self, m: usize) -> Result<Self, SeriesError> {
        if m == 0 {
            return Err(SeriesError::InvalidArgument("inflation factor must be >= 1".into()));
        }
        let Some(order) = self.order() else {
            return Ok(self.clone());
        };
        let mut coeffs = vec![self.ring.zero(); m * order + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[m * k] = c.clone();
        }
        Ok(TruncatedSeries { ring: self.ring.clone(), coeffs })
    }

    /// Multiply by `q^s`, keeping the order.
    pub fn shift(&self, s: usize) -> Self {
        let n = self.coeffs.len();
        let coeffs = (0..n)
            .map(|k| if k < s { self.ring.zero() } else { self.coeffs[k - s].clone() })
            .collect();
        TruncatedSeries { ring: self.ring.clone(), coeffs }
    }

    fn require_constant(&self, one: bool) -> Result<(), SeriesError> {
        let ok = match self.coeffs.first() {
            Some(c) if one => self.ring.is_one(c),
            Some(c) => self.ring.is_zero(c),
            None => true,
        };
        if ok {
            Ok(())
        } else {
            Err(SeriesError::ConstantTerm { expected: if one { "1" } else { "0" } })
        }
    }

    /// `log f` for `f_0 = 1`, from `n·g_n = n·f_n - Σ_{k<n} k·g_k·f_{n-k}`.
    pub fn log(&self) -> Result<Self, SeriesError> {
        self.require_constant(true)?;
        let r = &self.ring;
        let f = &self.coeffs;
        let mut g = vec![r.zero(); f.len()];
        for n in 1..f.len() {
            let mut acc = r.mul_int(&f[n], n as i64);
            for k in 1..n {
                if !r.is_zero(&g[k]) && !r.is_zero(&f[n - k]) {
                    acc = r.sub(&acc, &r.mul_int(&r.mul(&g[k], &f[n - k]), k as i64));
                }
            }
            g[n] = r.div_int(&acc, n as i64)?;
        }
        Ok(TruncatedSeries { ring: r.clone(), coeffs: g })
    }

    /// `exp f` for `f_0 = 0`, from `n·g_n = Σ_{k=1..n} k·f_k·g_{n-k}`.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        self.require_constant(false)?;
        let r = &self.ring;
        let f = &self.coeffs;
        if f.is_empty() {
            return Ok(self.clone());
        }
        // k·f_k, computed once
        let df: Vec<R::Elem> = f.iter().enumerate().map(|(k, c)| r.mul_int(c, k as i64)).collect();
        let mut g = vec![r.zero(); f.len()];
        g[0] = r.one();
        for n in 1..f.len() {
            let mut acc = r.zero();
            for k in 1..=n {
                if !r.is_zero(&df[k]) && !r.is_zero(&g[n - k]) {
                    acc = r.add(&acc, &r.mul(&df[k], &g[n - k]));
                }
            }
            g[n] = r.div_int(&acc, n as i64)?;
        }
        Ok(TruncatedSeries { ring: r.clone(), coeffs: g })
    }

    /// `f^d` for `f_0 = 1`: the unique `g` with `g_0 = 1` and `g'·f = d·f'·g`,
    /// via `n·g_n = Σ_{i=1..n} (i·d - (n - i))·f_i·g_{n-i}`.
    pub fn pow(&self, d: &R::Elem) -> Result<Self, SeriesError> {
        self.require_constant(true)?;
        let r = &self.ring;
        let f = &self.coeffs;
        if f.is_empty() {
            return Ok(self.clone());
        }
        let mut g = vec![r.zero(); f.len()];
        g[0] = r.one();
        for n in 1..f.len() {
            let mut acc = r.zero();
            for i in 1..=n {
                if r.is_zero(&f[i]) || r.is_zero(&g[n - i]) {
                    continue;
                }
                let weight = r.sub(&r.mul_int(d, i as i64), &r.from_int((n - i) as i64));
                acc = r.add(&acc, &r.mul(&weight, &r.mul(&f[i], &g[n - i])));
            }
            g[n] = r.div_int(&acc, n as i64)?;
        }
        Ok(TruncatedSeries { ring: r.clone(), coeffs: g })
    }

    /// Re-express every coefficient in another ring.
    pub fn map_ring<S: Ring>(&self, target: S, f: impl Fn(&R::Elem) -> S::Elem) -> TruncatedSeries<S> {
        let coeffs = self.coeffs.iter().map(f).collect();
        TruncatedSeries { ring: target, coeffs }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order().map_or(-1, |n| n as i64),
            "ring": self.ring.tag(),
            "coeffs": self.coeffs.iter().map(|c| self.ring.to_json(c)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(ring: R, v: &Value) -> Result<Self, SeriesError> {
        let tag = v.get("ring").and_then(Value::as_str);
        if tag != Some(ring.tag()) {
            return Err(SeriesError::Decode(format!("expected ring {:?}, found {tag:?}", ring.tag())));
        }
        let order = v
            .get("order")
            .and_then(Value::as_i64)
            .ok_or_else(|| SeriesError::Decode("missing order".into()))?;
        let items = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| SeriesError::Decode("missing coeffs".into()))?;
        if items.len() as i64 != order + 1 {
            return Err(SeriesError::Decode(format!(
                "order {order} but {} coefficients",
                items.len()
            )));
        }
        let coeffs = items.iter().map(|c| ring.from_json(c)).collect::<Result<Vec<_>, _>>()?;
        Ok(TruncatedSeries { ring, coeffs })
    }
}

impl TruncatedSeries<Rationals> {
    /// Embed a rational series into any ring through `from_rational`.
    pub fn promote<S: Ring>(&self, target: &S) -> TruncatedSeries<S> {
        self.map_ring(target.clone(), |c: &BigRational| target.from_rational(c))
    }
}
