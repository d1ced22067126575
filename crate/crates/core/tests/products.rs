mod common;

use borwein_core::qproducts::{
    borwein_product_finite, borwein_product_fractional, borwein_product_infinite_direct, borwein_product_squared_finite,
    jacobi_triple_product_check, pochhammer_finite, ProductSpec,
};
use borwein_core::ring::{DPolynomial, PolyRing, QuadraticField, Rationals};
use borwein_core::series::TruncatedSeries;
use common::{q, rational};
use proptest::prelude::*;
use serde_json::json;

/// `(q; q)_∞` from the pentagonal number theorem.
fn euler_function(order: usize) -> TruncatedSeries<Rationals> {
    let mut c = vec![0i64; order + 1];
    for k in -(order as i64)..=(order as i64) {
        let e = k * (3 * k - 1) / 2;
        if (0..=order as i64).contains(&e) {
            c[e as usize] += if k % 2 == 0 { 1 } else { -1 };
        }
    }
    TruncatedSeries::from_ints(Rationals, &c, order)
}

#[test]
fn product_times_cubes_is_euler_function() {
    // (q, q²; q³)_∞ (q³; q³)_∞ = (q; q)_∞
    let order = 120;
    let f = borwein_product_fractional(&Rationals, &q(1, 1), order).unwrap();
    let cubes = euler_function(order / 3).inflate(3).unwrap().truncate(order);
    assert_eq!(f.mul(&cubes).unwrap(), euler_function(order));
}

#[test]
fn construction_routes_agree_at_d_one() {
    for order in [0, 1, 7, 60, 150] {
        let log_route = borwein_product_fractional(&Rationals, &q(1, 1), order).unwrap();
        assert_eq!(log_route, borwein_product_infinite_direct(&Rationals, order).unwrap(), "order {order}");
    }
}

#[test]
fn finite_product_stabilizes() {
    for n in [1, 5, 10, 20] {
        let finite = borwein_product_finite(&Rationals, n, 3 * n).unwrap();
        let infinite = borwein_product_fractional(&Rationals, &q(1, 1), 3 * n).unwrap();
        assert_eq!(finite, infinite, "n = {n}");
        // the next factor (1 - q^{3n+1}) makes them differ
        let finite = borwein_product_finite(&Rationals, n, 3 * n + 1).unwrap();
        let infinite = borwein_product_fractional(&Rationals, &q(1, 1), 3 * n + 1).unwrap();
        assert_ne!(finite, infinite, "n = {n}");
    }
}

#[test]
fn finite_product_matches_dense_route() {
    for n in [0, 1, 3, 7] {
        let order = 3 * n * n + 2;
        let dense = pochhammer_finite(&Rationals, 1, 3, n, order)
            .unwrap()
            .mul(&pochhammer_finite(&Rationals, 2, 3, n, order).unwrap())
            .unwrap();
        assert_eq!(borwein_product_finite(&Rationals, n, order).unwrap(), dense, "n = {n}");
    }
}

#[test]
fn squared_finite_product_is_a_square() {
    for n in [0, 1, 4] {
        let order = 6 * n + 2;
        let f = borwein_product_finite(&Rationals, n, order).unwrap();
        assert_eq!(borwein_product_squared_finite(&Rationals, n, order).unwrap(), f.mul(&f).unwrap());
    }
}

#[test]
fn degree_law() {
    let n = 30;
    let f = borwein_product_fractional(&PolyRing, &DPolynomial::indeterminate(), n).unwrap();
    assert_eq!(f.coeffs()[0], DPolynomial::from_ints(&[1]));
    for (t, p) in f.coeffs().iter().enumerate().skip(1) {
        assert_eq!(p.degree(), Some(t), "q^{t}");
        // leading term (-d)^t / t!, from the q^1 factor alone
        if t <= 20 {
            let fact: u64 = (1..=t as u64).product();
            let sign = if t % 2 == 0 { 1 } else { -1 };
            assert_eq!(p.leading().unwrap(), &q(sign, fact as i64), "q^{t}");
        }
        assert_eq!(p.coeff(0), q(0, 1), "q^{t} vanishes at d = 0");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn formal_and_numeric_pipelines_commute(d0 in rational()) {
        let order = 20;
        let formal = borwein_product_fractional(&PolyRing, &DPolynomial::indeterminate(), order).unwrap();
        let numeric = borwein_product_fractional(&Rationals, &d0, order).unwrap();
        for (p, c) in formal.coeffs().iter().zip(numeric.coeffs()) {
            prop_assert_eq!(&p.eval_rational(&d0), c);
        }
    }
}

#[test]
fn quadratic_exponent_conjugates() {
    // the conjugate of f^{d*} is f^{conj(d*)}, coefficient by coefficient
    let (k, d) = QuadraticField::critical_exponent();
    let order = 12;
    let f = borwein_product_fractional(&k, &d, order).unwrap();
    let g = borwein_product_fractional(&k, &k.conjugate(&d), order).unwrap();
    for (x, y) in f.coeffs().iter().zip(g.coeffs()) {
        assert_eq!(k.conjugate(x), *y);
    }
    let formal = borwein_product_fractional(&PolyRing, &DPolynomial::indeterminate(), order).unwrap();
    for (p, x) in formal.coeffs().iter().zip(f.coeffs()) {
        assert_eq!(p.evaluate(&k, &d), *x);
    }
}

#[test]
fn jacobi_triple_product_to_200() {
    for z in [1, -1] {
        let report = jacobi_triple_product_check(z, 200, 15).unwrap();
        assert!(report.passed, "{report:?}");
    }
    assert!(jacobi_triple_product_check(2, 10, 5).is_err());
    assert!(jacobi_triple_product_check(1, 200, 13).is_err());
}

#[test]
fn product_spec_round_trip_and_expand() {
    let spec = ProductSpec::borwein_fractional(json!("1/2"), 30);
    assert_eq!(ProductSpec::from_json(&spec.to_json()).unwrap(), spec);
    let f = spec.expand(&Rationals).unwrap();
    assert_eq!(f, borwein_product_fractional(&Rationals, &q(1, 2), 30).unwrap());
    assert_eq!(f.mul(&f).unwrap(), borwein_product_fractional(&Rationals, &q(1, 1), 30).unwrap());
    let other = ProductSpec::borwein_fractional(json!("1/2"), 31);
    assert_ne!(spec.canonical_string(), other.canonical_string());
}
