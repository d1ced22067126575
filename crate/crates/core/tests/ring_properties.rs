mod common;

use borwein_core::ring::{
    DPolynomial, Dyadic, IntervalField, IntervalValue, PolyRing, QuadraticElement, QuadraticField, Rationals, Ring,
    Sign,
};
use common::{dpoly, quadratic, rational};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;

fn check_axioms<R: Ring>(ring: &R, x: &R::Elem, y: &R::Elem, z: &R::Elem) {
    assert_eq!(ring.add(&ring.add(x, y), z), ring.add(x, &ring.add(y, z)));
    assert_eq!(ring.mul(&ring.mul(x, y), z), ring.mul(x, &ring.mul(y, z)));
    assert_eq!(ring.add(x, y), ring.add(y, x));
    assert_eq!(ring.mul(x, y), ring.mul(y, x));
    assert_eq!(ring.mul(x, &ring.add(y, z)), ring.add(&ring.mul(x, y), &ring.mul(x, z)));
    assert_eq!(ring.add(x, &ring.zero()), *x);
    assert_eq!(ring.mul(x, &ring.one()), *x);
    assert!(ring.is_zero(&ring.add(x, &ring.neg(x))));
}

/// Outward enclosure of `√D` with `bits` fractional bits.
fn sqrt_enclosure(radicand: u64, bits: u32) -> IntervalValue {
    let scaled = BigUint::from(radicand) << (2 * bits as usize);
    let root = BigInt::from(scaled.sqrt());
    let lo = Dyadic::new(root.clone(), -(bits as i64));
    let hi = Dyadic::new(root + 1, -(bits as i64));
    IntervalValue::new(lo, hi).unwrap()
}

proptest! {
    #[test]
    fn rational_axioms(x in rational(), y in rational(), z in rational()) {
        check_axioms(&Rationals, &x, &y, &z);
    }

    #[test]
    fn quadratic_axioms(x in quadratic(), y in quadratic(), z in quadratic()) {
        let (k, _) = QuadraticField::critical_exponent();
        check_axioms(&k, &x, &y, &z);
        if !k.is_zero(&y) {
            prop_assert_eq!(k.mul(&k.div(&x, &y).unwrap(), &y), x);
        }
    }

    #[test]
    fn polynomial_axioms(x in dpoly(4), y in dpoly(4), z in dpoly(4)) {
        check_axioms(&PolyRing, &x, &y, &z);
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in dpoly(5), r in dpoly(5), at in rational()) {
        let ev = |x: &DPolynomial| x.evaluate(&Rationals, &at);
        prop_assert_eq!(ev(&p.add(&r)), ev(&p) + ev(&r));
        prop_assert_eq!(ev(&p.mul(&r)), ev(&p) * ev(&r));
        let (k, dstar) = QuadraticField::critical_exponent();
        let evq = |x: &DPolynomial| x.evaluate(&k, &dstar);
        prop_assert_eq!(evq(&p.mul(&r)), k.mul(&evq(&p), &evq(&r)));
    }

    #[test]
    fn interval_operations_enclose(x in rational(), y in rational(), bits in 8u32..=200) {
        let k = IntervalField::new(bits).unwrap();
        let (ix, iy) = (k.from_rational(&x), k.from_rational(&y));
        prop_assert!(k.add(&ix, &iy).contains_rational(&(&x + &y)));
        prop_assert!(k.sub(&ix, &iy).contains_rational(&(&x - &y)));
        prop_assert!(k.mul(&ix, &iy).contains_rational(&(&x * &y)));
        if y != BigRational::from_integer(0.into()) {
            if let Ok(q) = k.div(&ix, &iy) {
                prop_assert!(q.contains_rational(&(&x / &y)));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn quadratic_sign_matches_interval_evaluation(x in quadratic()) {
        let (k, _) = QuadraticField::critical_exponent();
        let f = IntervalField::new(200).unwrap();
        let root = sqrt_enclosure(k.radicand(), 200);
        let approx = f.add(&f.from_rational(&x.a), &f.mul(&f.from_rational(&x.b), &root));
        let interval_sign = f.sign(&approx).unwrap();
        if interval_sign != Sign::Unknown {
            prop_assert_eq!(k.sign(&x).unwrap(), interval_sign);
        }
    }
}

#[test]
fn critical_exponent_is_a_root() {
    let (k, d) = QuadraticField::critical_exponent();
    let p = DPolynomial::from_ints(&[2, -9, 1]);
    assert!(k.is_zero(&p.evaluate(&k, &d)));
    assert_eq!(k.sign(&d).unwrap(), Sign::Positive);
    // d < 1/4, since 1/4 - d = (√73 - 17/2)/2 > 0
    let quarter = QuadraticElement::rational(BigRational::new(1.into(), 4.into()));
    assert_eq!(k.sign(&k.sub(&quarter, &d)).unwrap(), Sign::Positive);
}
