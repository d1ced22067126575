#![allow(dead_code)]

use borwein_core::ring::{DPolynomial, QuadraticElement, Rationals};
use borwein_core::series::TruncatedSeries;
use num_rational::BigRational;
use proptest::collection::vec;
use proptest::prelude::*;

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn rational() -> impl Strategy<Value = BigRational> {
    (-60i64..=60, 1i64..=12).prop_map(|(n, d)| q(n, d))
}

pub fn small_rational() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

pub fn series(order: usize) -> impl Strategy<Value = TruncatedSeries<Rationals>> {
    vec(rational(), order + 1).prop_map(|c| TruncatedSeries::from_coeffs(Rationals, c))
}

/// Constant term 1 and small entries, so exact powers stay cheap.
pub fn unit_series(order: usize) -> impl Strategy<Value = TruncatedSeries<Rationals>> {
    vec(small_rational(), order).prop_map(|tail| {
        let mut c = vec![q(1, 1)];
        c.extend(tail);
        TruncatedSeries::from_coeffs(Rationals, c)
    })
}

pub fn quadratic() -> impl Strategy<Value = QuadraticElement> {
    (rational(), rational()).prop_map(|(a, b)| QuadraticElement::new(a, b))
}

pub fn dpoly(max_degree: usize) -> impl Strategy<Value = DPolynomial> {
    vec(rational(), 0..=max_degree + 1).prop_map(DPolynomial::new)
}
