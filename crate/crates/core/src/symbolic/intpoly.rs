//! Integer polynomials: the exact workhorse behind root isolation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ring::{DPolynomial, Sign};

/// Primes for the modular coprimality shortcut in [`IntPoly::gcd`].
const GCD_PRIMES: [u64; 3] = [2_305_843_009_213_693_951, 4_294_967_291, 1_000_000_007];

/// A polynomial with integer coefficients, lowest degree first, trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct IntPoly {
    c: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        IntPoly { c }
    }

    /// `den·x - num`, the linear polynomial vanishing at `r`.
    pub fn linear_root(r: &BigRational) -> Self {
        IntPoly::new(vec![-r.numer(), r.denom().clone()])
    }

    /// Positive rational multiple with coprime integer coefficients. Signs are
    /// preserved, so `sign(self(x)) == sign(p(x))` everywhere.
    pub fn from_dpoly(p: &DPolynomial) -> Self {
        let lcm = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let c = p.coeffs().iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        IntPoly::new(c).content_free()
    }

    pub fn to_dpoly(&self) -> DPolynomial {
        DPolynomial::new(self.c.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn leading(&self) -> &BigInt {
        self.c.last().expect("nonzero polynomial")
    }

    fn content(&self) -> BigInt {
        self.c.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    /// Divide by the (positive) content.
    fn content_free(self) -> Self {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self;
        }
        IntPoly { c: self.c.into_iter().map(|x| x / &g).collect() }
    }

    /// Content-free with a positive leading coefficient.
    pub fn primitive(&self) -> Self {
        let p = self.clone().content_free();
        if p.c.last().is_some_and(Signed::is_negative) {
            IntPoly { c: p.c.into_iter().map(|x| -x).collect() }
        } else {
            p
        }
    }

    pub fn derivative(&self) -> Self {
        IntPoly::new(self.c.iter().enumerate().skip(1).map(|(k, x)| x * BigInt::from(k)).collect())
    }

    /// `Σ c_i p^i q^{n-i}`, which has the sign of `self(p/q)` for `q > 0`.
    fn homogeneous_eval(&self, r: &BigRational) -> BigInt {
        let (p, q) = (r.numer(), r.denom());
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        for (i, ci) in self.c.iter().enumerate().rev() {
            if i + 1 == self.c.len() {
                acc = ci.clone();
            } else {
                qpow *= q;
                acc = acc * p + ci * &qpow;
            }
        }
        acc
    }

    pub fn sign_at(&self, r: &BigRational) -> Sign {
        Sign::of_bigint(&self.homogeneous_eval(r))
    }

    /// Number of sign changes in the coefficients of `(1+y)^n P((a + b y)/(1 + y))`:
    /// an upper bound on the roots in `(a, b)` with the same parity.
    pub fn descartes_count(&self, a: &BigRational, b: &BigRational) -> usize {
        let Some(n) = self.degree() else { return 0 };
        if n == 0 {
            return 0;
        }
        let den = a.denom().lcm(b.denom());
        let start = (a * &den).to_integer();
        let width = ((b - a) * &den).to_integer();
        // q[y] = den^n · P((start + width·y)/den), by Horner on integer polynomials
        let mut q: Vec<BigInt> = vec![self.c[n].clone()];
        let mut den_pow = BigInt::one();
        for i in (0..n).rev() {
            den_pow *= &den;
            let mut next = vec![BigInt::zero(); q.len() + 1];
            for (k, x) in q.iter().enumerate() {
                next[k] += x * &start;
                next[k + 1] += x * &width;
            }
            next[0] += &self.c[i] * &den_pow;
            q = next;
        }
        // reverse, then shift y -> y + 1
        q.reverse();
        for i in 0..n {
            for j in (i..n).rev() {
                let hi = q[j + 1].clone();
                q[j] += hi;
            }
        }
        sign_variations(&q)
    }

    /// Exact quotient over Q, if `divisor` divides `self`.
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let (quot, rem) = self.to_dpoly().div_rem(&divisor.to_dpoly()).ok()?;
        rem.is_zero().then(|| IntPoly::from_dpoly(&quot))
    }

    /// Monic-free gcd: primitive, positive leading coefficient. Coprimality is
    /// first tested modulo a few primes; the primitive remainder sequence runs
    /// only when that test is inconclusive.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.primitive();
        }
        if other.is_zero() {
            return self.primitive();
        }
        if self.degree() == Some(0) || other.degree() == Some(0) {
            return IntPoly::new(vec![BigInt::one()]);
        }
        if GCD_PRIMES.iter().any(|&p| coprime_mod(self, other, p)) {
            return IntPoly::new(vec![BigInt::one()]);
        }
        let (mut a, mut b) = if self.c.len() >= other.c.len() {
            (self.primitive(), other.primitive())
        } else {
            (other.primitive(), self.primitive())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive();
        }
        a.primitive()
    }

    /// Remainder of `lc(b)^k · self` by `b`, content removed along the way.
    fn pseudo_rem(&self, b: &IntPoly) -> IntPoly {
        let db = b.c.len() - 1;
        let lb = b.leading();
        let mut r = self.clone();
        while r.c.len() > db {
            let shift = r.c.len() - 1 - db;
            let lr = r.leading().clone();
            let mut next: Vec<BigInt> = r.c.iter().map(|x| x * lb).collect();
            for (i, x) in b.c.iter().enumerate() {
                next[i + shift] -= x * &lr;
            }
            r = IntPoly::new(next).content_free();
        }
        r
    }

    /// `self / gcd(self, self')`.
    pub fn square_free(&self) -> IntPoly {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.clone().content_free();
        }
        self.div_exact(&g).expect("gcd divides the polynomial")
    }

    /// Yun's square-free factorisation: `(factor, multiplicity)` pairs with
    /// pairwise coprime, square-free factors of positive degree.
    pub fn square_free_factors(&self) -> Vec<(IntPoly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        // c and w must share one scaling, so the divisions stay in Q[d]
        let f = self.to_dpoly();
        let g = self.gcd(&self.derivative()).to_dpoly();
        let quo = |x: &DPolynomial, y: &DPolynomial| x.div_rem(y).expect("nonzero divisor").0;
        let mut c = quo(&f, &g);
        let mut w = quo(&f.derivative(), &g).sub(&c.derivative());
        let mut k = 1;
        while c.degree().unwrap_or(0) > 0 {
            let a = IntPoly::from_dpoly(&c).gcd(&IntPoly::from_dpoly(&w));
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), k));
            }
            let a = a.to_dpoly();
            c = quo(&c, &a);
            w = quo(&w, &a).sub(&c.derivative());
            k += 1;
        }
        out
    }

    /// All real roots lie strictly inside `(-B, B)`, `B = 1 + max |c_i / c_n|`.
    pub fn cauchy_bound(&self) -> BigRational {
        let lead = self.leading().abs();
        let m = self.c[..self.c.len() - 1].iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero);
        BigRational::one() + BigRational::new(m, lead)
    }
}

fn sign_variations(c: &[BigInt]) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for x in c {
        let s = match x.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => continue,
            num_bigint::Sign::Plus => 1,
        };
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn reduce_mod(p: &IntPoly, m: u64) -> Vec<u64> {
    let mb = BigInt::from(m);
    let mut v: Vec<u64> = p.c.iter().map(|x| x.mod_floor(&mb).to_u64().unwrap()).collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// True only when the images mod `p` keep their degrees and are coprime,
/// which proves coprimality over Q.
fn coprime_mod(a: &IntPoly, b: &IntPoly, p: u64) -> bool {
    let mut x = reduce_mod(a, p);
    let mut y = reduce_mod(b, p);
    if x.len() != a.c.len() || y.len() != b.c.len() {
        return false;
    }
    while !y.is_empty() {
        // x <- x mod y
        let inv = pow_mod(*y.last().unwrap(), p - 2, p);
        while x.len() >= y.len() {
            let shift = x.len() - y.len();
            let f = mul_mod(*x.last().unwrap(), inv, p);
            for (i, &yi) in y.iter().enumerate() {
                let t = mul_mod(f, yi, p);
                x[i + shift] = (x[i + shift] + p - t) % p;
            }
            while x.last() == Some(&0) {
                x.pop();
            }
        }
        std::mem::swap(&mut x, &mut y);
    }
    x.len() == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn from_dpoly_clears_denominators_and_keeps_sign() {
        // -(d/6)(d^2 - 9d + 2)
        let p = DPolynomial::new(vec![q(0, 1), q(-1, 3), q(3, 2), q(-1, 6)]);
        assert_eq!(IntPoly::from_dpoly(&p), ip(&[0, -2, 9, -1]));
    }

    #[test]
    fn descartes_counts() {
        // (x - 1)(x - 2)(x - 3)
        let p = ip(&[-6, 11, -6, 1]);
        assert_eq!(p.descartes_count(&q(0, 1), &q(4, 1)), 3);
        assert_eq!(p.descartes_count(&q(3, 2), &q(5, 2)), 1);
        assert_eq!(p.descartes_count(&q(7, 2), &q(9, 2)), 0);
        assert_eq!(p.descartes_count(&q(-5, 1), &q(1, 2)), 0);
    }

    #[test]
    fn gcd_finds_common_factor() {
        // (x-1)(x+2) and (x-1)(x-5)
        let a = ip(&[-2, 1, 1]);
        let b = ip(&[5, -6, 1]);
        assert_eq!(a.gcd(&b), ip(&[-1, 1]));
        assert_eq!(ip(&[2, -9, 1]).gcd(&ip(&[-3, 1])), ip(&[1]));
    }

    #[test]
    fn square_free_part() {
        // (x-1)^2 (x+3)
        let p = ip(&[3, -5, 1, 1]);
        assert_eq!(p.square_free(), ip(&[-3, 2, 1]));
        let f = p.square_free_factors();
        assert_eq!(f, vec![(ip(&[3, 1]), 1), (ip(&[-1, 1]), 2)]);
    }

    #[test]
    fn sign_at_rational() {
        let p = ip(&[2, -9, 1]);
        assert_eq!(p.sign_at(&q(1, 5)), Sign::Positive);
        assert_eq!(p.sign_at(&q(1, 4)), Sign::Negative);
        assert_eq!(ip(&[-1, 2]).sign_at(&q(1, 2)), Sign::Zero);
    }

    #[test]
    fn cauchy_bound_contains_roots() {
        let p = ip(&[2, -9, 1]);
        assert_eq!(p.cauchy_bound(), q(10, 1));
    }
}
