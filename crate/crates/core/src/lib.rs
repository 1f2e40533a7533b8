//! Numerical laboratory for space-time resonances of quadratic dispersive interactions.

pub mod cli;
pub mod dispersion;
pub mod duhamel;
pub mod error;
pub mod geometry;
pub mod oscillatory;
pub mod rates;
pub mod smooth;
pub mod spectral;

pub use error::{Error, Result};
