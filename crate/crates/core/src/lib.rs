//! Exact and floating-point computations with the nearly Kähler structure of
//! the six-sphere and almost complex structures on it.

pub mod chern;
pub mod cli;
pub mod compat;
pub mod dga;
pub mod error;
pub mod field;
pub mod form;
pub mod g2;
pub mod json;
pub mod matrix;
pub mod poly;
pub mod polyform;
pub mod sampling;
pub mod scalar;
pub mod sphere;
pub mod symplectic;
pub mod threeform;

pub use error::{Error, Result};
