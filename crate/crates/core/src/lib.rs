//! Strict birational group laws, reconstruction of the group they define,
//! and Néron smoothening of models over a discrete valuation ring.

pub mod arith;
pub mod birlaw;
pub mod error;
pub mod ideals;
pub mod poly;
pub mod pipeline;
pub mod ratmap;
pub mod smoothening;
pub mod volume;
pub mod weilgroup;

pub use arith::{DvrDescriptor, DvrElem, Field, Fp, FpRatFn, FracElem, Rational, Ring};
pub use error::*;
pub use ideals::{GroebnerConfig, Ideal};
pub use poly::{Monomial, MonomialOrder, Poly, PolyRing, RatFunc};

pub type QPoly = Poly<Rational>;
pub type FpPoly = Poly<Fp>;
pub type DvrPoly = Poly<DvrElem>;
pub type KPoly = Poly<FracElem>;
pub type QRatFunc = RatFunc<Rational>;
pub type KRatFunc = RatFunc<FracElem>;
