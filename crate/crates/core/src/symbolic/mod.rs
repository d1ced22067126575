//! Dissected coefficients as polynomials in `d`, exact real roots, and the
//! `d`-regions on which every sign-adjusted coefficient is nonnegative.

mod algebraic;
mod intpoly;
mod region;

use thiserror::Error;

use crate::qproducts::borwein_product_fractional;
use crate::ring::{DPolynomial, PolyRing};
use crate::series::SeriesError;

pub use algebraic::{isolate_real_roots, AlgebraicNumber, RealRoot};
pub use region::{binding_constraints, feasible_region, Domain, Endpoint, FeasibleRegion, GapStatus, RegionInterval};

pub const DEFAULT_SYMBOLIC_ORDER: usize = 60;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("not an isolating interval: {0}")]
    NotIsolating(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{0} is not an endpoint of the feasible region")]
    NotAnEndpoint(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Coefficients of `q^0..q^order` in `(q, q²; q³)_∞^d` as polynomials in `d`.
pub fn coefficient_polynomials(order: usize) -> Result<Vec<DPolynomial>, SymbolicError> {
    let f = borwein_product_fractional(&PolyRing, &DPolynomial::indeterminate(), order)?;
    Ok(f.into_coeffs())
}

/// Coefficient of `q^t` as a polynomial in `d` (degree `t`).
pub fn coefficient_polynomial(t: usize, order: usize) -> Result<DPolynomial, SymbolicError> {
    check_index(t, order)?;
    Ok(coefficient_polynomials(t)?.swap_remove(t))
}

fn check_index(t: usize, order: usize) -> Result<(), SymbolicError> {
    if t == 0 || t > order {
        return Err(SymbolicError::InvalidArgument(format!("need 1 <= t <= N, got t = {t}, N = {order}")));
    }
    Ok(())
}

/// Orient a coefficient so that nonnegativity of the dissection component
/// entry reads `p_t(d) >= 0`: components `B` and `C` carry a minus sign.
fn orient(t: usize, p: DPolynomial) -> DPolynomial {
    if t.is_multiple_of(3) {
        p
    } else {
        p.neg()
    }
}

pub fn sign_adjusted_constraint(t: usize, order: usize) -> Result<DPolynomial, SymbolicError> {
    Ok(orient(t, coefficient_polynomial(t, order)?))
}

/// `p_1, ..., p_order`, indexed from `t = 1`.
pub fn constraints(order: usize) -> Result<Vec<DPolynomial>, SymbolicError> {
    Ok(coefficient_polynomials(order)?
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(t, p)| orient(t, p))
        .collect())
}
