use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde_json::{json, Value};

use super::intpoly::IntPoly;
use super::SymbolicError;
use crate::ring::{rational_to_f64, DPolynomial, Sign};

/// A real algebraic number: a square-free integer polynomial together with an
/// isolating interval.
///
/// Either `lo == hi` and the number is that rational, or the polynomial has
/// exactly one root in the open interval `(lo, hi)` and takes opposite nonzero
/// signs at `lo` and `hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicNumber {
    poly: IntPoly,
    lo: BigRational,
    hi: BigRational,
}

/// A real root together with its multiplicity in the input polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealRoot {
    pub root: AlgebraicNumber,
    pub multiplicity: usize,
}

fn gcd_width() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << 24)
}

fn midpoint(a: &BigRational, b: &BigRational) -> BigRational {
    (a + b) / BigInt::from(2)
}

impl AlgebraicNumber {
    pub fn from_rational(r: BigRational) -> Self {
        AlgebraicNumber { poly: IntPoly::linear_root(&r), lo: r.clone(), hi: r }
    }

    /// The unique root of `poly` in `[lo, hi]`. Fails unless there is exactly
    /// one.
    pub fn new(poly: &DPolynomial, lo: BigRational, hi: BigRational) -> Result<Self, SymbolicError> {
        if poly.is_zero() {
            return Err(SymbolicError::ZeroPolynomial);
        }
        if lo > hi {
            return Err(SymbolicError::NotIsolating(format!("empty interval [{lo}, {hi}]")));
        }
        let sqf = IntPoly::from_dpoly(poly).square_free();
        let mut roots = isolate_closed(&sqf, &lo, &hi);
        if roots.len() != 1 {
            return Err(SymbolicError::NotIsolating(format!(
                "{poly} has {} roots in [{lo}, {hi}]",
                roots.len()
            )));
        }
        Ok(roots.remove(0))
    }

    pub(crate) fn from_parts(poly: IntPoly, lo: BigRational, hi: BigRational) -> Self {
        AlgebraicNumber { poly, lo, hi }
    }

    /// Defining polynomial (square-free, integer coefficients).
    pub fn polynomial(&self) -> DPolynomial {
        self.poly.to_dpoly()
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// `Some` when the interval has collapsed to a point.
    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.lo == self.hi).then_some(&self.lo)
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn approx_f64(&self) -> f64 {
        rational_to_f64(&midpoint(&self.lo, &self.hi))
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    /// One bisection step; the width halves unless the midpoint is the root.
    pub fn refine(&mut self) {
        if self.is_exact() {
            return;
        }
        let m = midpoint(&self.lo, &self.hi);
        self.split_at(m);
    }

    /// Replace the interval by the side of `x` containing the root (or by `x`
    /// itself). `x` must lie in `(lo, hi)`.
    fn split_at(&mut self, x: BigRational) {
        match self.poly.sign_at(&x) {
            Sign::Zero => {
                self.lo = x.clone();
                self.hi = x;
            }
            s if s == self.poly.sign_at(&self.lo) => self.lo = x,
            _ => self.hi = x,
        }
    }

    pub fn refine_to_width(&mut self, width: &BigRational) {
        while !self.is_exact() && self.width() > *width {
            self.refine();
        }
    }

    pub fn cmp_rational(&mut self, r: &BigRational) -> Ordering {
        if self.is_exact() {
            return self.lo.cmp(r);
        }
        if *r <= self.lo {
            return Ordering::Greater;
        }
        if *r >= self.hi {
            return Ordering::Less;
        }
        self.split_at(r.clone());
        self.cmp_rational(r)
    }

    /// Exact comparison, narrowing both intervals as needed.
    pub fn cmp_refining(&mut self, other: &mut AlgebraicNumber) -> Ordering {
        if let Some(r) = other.as_rational().cloned() {
            return self.cmp_rational(&r);
        }
        if let Some(r) = self.as_rational().cloned() {
            return other.cmp_rational(&r).reverse();
        }
        let mut gcd_checked = false;
        loop {
            if self.hi <= other.lo {
                return Ordering::Less;
            }
            if other.hi <= self.lo {
                return Ordering::Greater;
            }
            // distinct roots usually separate quickly; the gcd is the slow path
            if !gcd_checked && self.width() < gcd_width() && other.width() < gcd_width() {
                gcd_checked = true;
                if self.shares_root_with(other) {
                    return Ordering::Equal;
                }
            }
            self.refine();
            other.refine();
            if self.is_exact() || other.is_exact() {
                return self.cmp_refining(other);
            }
        }
    }

    /// Both intervals are open and overlap: the numbers coincide iff the gcd of
    /// the two polynomials changes sign on the overlap.
    fn shares_root_with(&self, other: &AlgebraicNumber) -> bool {
        let g = self.poly.gcd(&other.poly);
        if g.degree().unwrap_or(0) == 0 {
            return false;
        }
        let lo = (&self.lo).max(&other.lo);
        let hi = (&self.hi).min(&other.hi);
        // g divides both polynomials, so it is nonzero at every endpoint
        let (a, b) = (g.sign_at(lo), g.sign_at(hi));
        a != b && a != Sign::Zero && b != Sign::Zero
    }

    pub fn equals(&mut self, other: &mut AlgebraicNumber) -> bool {
        self.cmp_refining(other) == Ordering::Equal
    }

    /// Exact sign of `p` at this number.
    pub fn sign_of(&mut self, p: &DPolynomial) -> Sign {
        let ip = IntPoly::from_dpoly(p);
        self.sign_of_int(&ip)
    }

    pub(crate) fn sign_of_int(&mut self, p: &IntPoly) -> Sign {
        if p.is_zero() {
            return Sign::Zero;
        }
        if let Some(r) = self.as_rational() {
            return p.sign_at(r);
        }
        let g = self.poly.gcd(p);
        if g.degree().unwrap_or(0) > 0 && g.sign_at(&self.lo) != g.sign_at(&self.hi) {
            return Sign::Zero;
        }
        loop {
            if p.descartes_count(&self.lo, &self.hi) == 0 {
                return p.sign_at(&midpoint(&self.lo, &self.hi));
            }
            self.refine();
            if let Some(r) = self.as_rational() {
                return p.sign_at(r);
            }
        }
    }

    /// Collapse to an exact rational if the number is rational.
    ///
    /// A rational root `u/v` in lowest terms of a primitive integer polynomial
    /// has `v | lc`, so `lc · x` is an integer; once the interval is narrower
    /// than `1/|lc|` at most one candidate remains.
    pub fn try_make_rational(&mut self) -> bool {
        if self.is_exact() {
            return true;
        }
        let lc = self.poly.leading().abs();
        let limit = BigRational::new(BigInt::one(), lc.clone());
        self.refine_to_width(&limit);
        if self.is_exact() {
            return true;
        }
        let lcr = BigRational::from_integer(lc.clone());
        let candidate = (&self.lo * &lcr).floor() + BigRational::one();
        if candidate < &self.hi * &lcr {
            let x = candidate / lcr;
            if self.poly.sign_at(&x) == Sign::Zero {
                self.lo = x.clone();
                self.hi = x;
                return true;
            }
        }
        false
    }

    /// Shrink the defining polynomial: take gcds with other polynomials known
    /// to vanish here, then strip every rational root other than this one.
    /// Returns whether the result is certified minimal (degree <= 3 with no
    /// rational roots, or degree 1).
    pub fn simplify(&mut self, also_vanishing: &[DPolynomial]) -> bool {
        if self.try_make_rational() {
            let r = self.lo.clone();
            self.poly = IntPoly::linear_root(&r);
            return true;
        }
        for p in also_vanishing {
            let g = self.poly.gcd(&IntPoly::from_dpoly(p));
            if g.degree().unwrap_or(0) > 0 && g.sign_at(&self.lo) != g.sign_at(&self.hi) {
                self.poly = g;
            }
        }
        let mut poly = self.poly.clone();
        for mut root in isolate_all(&poly) {
            if root.try_make_rational() {
                let r = root.lo.clone();
                poly = poly.div_exact(&IntPoly::linear_root(&r)).expect("rational root divides");
            }
        }
        self.poly = poly.primitive();
        // the interval endpoints keep opposite signs under positive rescaling
        debug_assert_ne!(self.poly.sign_at(&self.lo), self.poly.sign_at(&self.hi));
        self.poly.degree().is_some_and(|d| d <= 3)
    }

    pub fn to_json(&self) -> Value {
        match self.as_rational() {
            Some(r) => json!({"type": "rational", "value": r.to_string()}),
            None => json!({
                "type": "algebraic",
                "minpoly": self.poly.to_dpoly().to_json(),
                "interval": [self.lo.to_string(), self.hi.to_string()],
                "approx": format!("{:.12}", self.approx_f64()),
            }),
        }
    }
}

/// Real roots in the closed interval `[lo, hi]` of a square-free polynomial,
/// ascending.
pub(crate) fn isolate_closed(p: &IntPoly, lo: &BigRational, hi: &BigRational) -> Vec<AlgebraicNumber> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    if p.sign_at(lo) == Sign::Zero {
        out.push(AlgebraicNumber::from_parts(p.clone(), lo.clone(), lo.clone()));
    }
    if lo < hi {
        isolate_open(p, lo.clone(), hi.clone(), &mut out);
        if p.sign_at(hi) == Sign::Zero {
            out.push(AlgebraicNumber::from_parts(p.clone(), hi.clone(), hi.clone()));
        }
    }
    out
}

/// All real roots of a square-free polynomial, ascending.
pub(crate) fn isolate_all(p: &IntPoly) -> Vec<AlgebraicNumber> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let b = p.cauchy_bound();
    isolate_closed(p, &-b.clone(), &b)
}

fn isolate_open(p: &IntPoly, a: BigRational, b: BigRational, out: &mut Vec<AlgebraicNumber>) {
    match p.descartes_count(&a, &b) {
        0 => {}
        1 => out.push(tighten(p, a, b)),
        _ => {
            let m = midpoint(&a, &b);
            isolate_open(p, a, m.clone(), out);
            if p.sign_at(&m) == Sign::Zero {
                out.push(AlgebraicNumber::from_parts(p.clone(), m.clone(), m.clone()));
            }
            isolate_open(p, m, b, out);
        }
    }
}

/// `(a, b)` holds exactly one root; move zero endpoints inward until the
/// polynomial has opposite nonzero signs at both ends.
fn tighten(p: &IntPoly, mut a: BigRational, mut b: BigRational) -> AlgebraicNumber {
    while p.sign_at(&a) == Sign::Zero || p.sign_at(&b) == Sign::Zero {
        let m = midpoint(&a, &b);
        if p.sign_at(&m) == Sign::Zero {
            return AlgebraicNumber::from_parts(p.clone(), m.clone(), m);
        }
        // the half holding the root has an odd Descartes count
        if p.descartes_count(&a, &m).is_odd() {
            b = m;
        } else {
            a = m;
        }
    }
    AlgebraicNumber::from_parts(p.clone(), a, b)
}

/// Distinct real roots of `p` with multiplicities, ascending.
pub fn isolate_real_roots(p: &DPolynomial) -> Result<Vec<RealRoot>, SymbolicError> {
    if p.is_zero() {
        return Err(SymbolicError::ZeroPolynomial);
    }
    let ip = IntPoly::from_dpoly(p);
    let mut roots: Vec<RealRoot> = ip
        .square_free_factors()
        .into_iter()
        .flat_map(|(factor, multiplicity)| {
            let roots = match factor.degree() {
                Some(1) => {
                    let c = factor.to_dpoly();
                    vec![AlgebraicNumber::from_rational(-c.coeff(0) / c.coeff(1))]
                }
                _ => isolate_all(&factor),
            };
            roots.into_iter().map(move |root| RealRoot { root, multiplicity })
        })
        .collect();
    // factors are coprime, so no two roots coincide and the sort is strict
    sort_roots(&mut roots);
    Ok(roots)
}

fn sort_roots(roots: &mut Vec<RealRoot>) {
    let mut sorted: Vec<RealRoot> = Vec::with_capacity(roots.len());
    for mut r in roots.drain(..) {
        let (mut lo, mut hi) = (0, sorted.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if r.root.cmp_refining(&mut sorted[mid].root) == Ordering::Less {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        sorted.insert(lo, r);
    }
    *roots = sorted;
}
