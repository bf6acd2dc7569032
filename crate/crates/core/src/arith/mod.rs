//! Exact coefficient arithmetic: rationals, prime fields, the two supported
//! discrete valuation rings and Smith normal form over them.

pub mod dvr;
pub mod fp;
pub mod rational;
pub mod snf;
pub mod traits;
pub mod unipoly;

pub use dvr::{t_poly, DvrDescriptor, DvrElem, FracElem, Valuation};
pub use fp::{is_prime, Fp};
pub use rational::Rational;
pub use snf::{smith_normal_form, torsion_length, SnfResult};
pub use traits::{Field, Ring};
pub use unipoly::{FpRatFn, UniPoly};
