//! Polynomials, linear forms, rational functions with linear-form
//! denominators, and exact matrices over them.

pub mod linform;
pub mod matrix;
pub mod monomial;
#[allow(clippy::module_inception)]
pub mod poly;
pub mod ratfunc;
mod serde_impl;

pub use linform::LinForm;
pub use matrix::Matrix;
pub use monomial::{monomials_of_degree, weighted_monomials, Monomial};
pub use poly::{linear_poly, Poly};
pub use ratfunc::{poly_valuation, ratfunc_det, split_linear, RatFunc};
pub use serde_impl::{PolyTerm, RatFuncJson};
