//! Euler calculus of constructible functions on low-dimensional Euclidean
//! spaces and on the 3-sphere, with Monte Carlo and template-method harnesses
//! for additive and multiplicative kinematic formulas.

pub mod arrangement;
pub mod cf;
pub mod complex;
pub mod error;
pub mod float_geom;
pub mod io;
pub mod linalg;
pub mod ops;
pub mod par;
pub mod polytope;
pub mod rng;
pub mod scalar;
pub mod sphere3;
pub mod valuations;

pub use cf::StratifiedCF;
pub use complex::SimplicialComplex;
pub use error::{Error, Result};
pub use polytope::{ConvexPolytope, PolytopeCombination};
pub use scalar::{ExactScalar, Point};
