//! Exact truncated q-series toolkit for fractional powers of the product
//! `(q, q²; q³)_∞`, their 3-dissections, and the exponent regions on which the
//! dissection components stay nonnegative.

pub mod ring;
pub mod series;
pub mod qproducts;
pub mod dissection;
pub mod symbolic;
