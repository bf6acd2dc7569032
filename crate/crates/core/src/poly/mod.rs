//! Sparse multivariate polynomials and rational functions.

pub mod monomial;
pub mod parse;
#[allow(clippy::module_inception)]
pub mod poly;
pub mod ratfunc;

pub use monomial::{Monomial, MonomialOrder};
pub use parse::{parse_poly, parse_ratfunc};
pub use poly::{same_ring, Poly, PolyRing};
pub use ratfunc::RatFunc;
