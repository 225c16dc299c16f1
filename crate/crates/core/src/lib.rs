//! Computational toolkit for Danielewski surfaces `xy = p(z)`.
//!
//! The crate covers the defining polynomial ([`poly`]), entire functions of one
//! variable used as overshear data ([`entire`]), the surface with its 2-sheeted
//! projection to `C^2` ([`surface`]), overshear automorphisms and their words
//! ([`autos`]), a Monte-Carlo estimator of the Nevanlinna characteristic
//! ([`nevanlinna`]) and a registry of seeded numerical experiments ([`checks`]).

pub mod autos;
pub mod checks;
pub mod diff;
pub mod entire;
mod error;
pub mod nevanlinna;
pub mod parse;
pub mod poly;
pub mod rng;
pub mod scaled;
pub mod surface;
pub mod surface_expr;

pub use error::{Error, Result};
pub use num_complex::Complex64;
