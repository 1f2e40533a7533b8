//! Uniform-grid spectral substrate: transforms, propagators, bilinear multipliers and norms.

mod bilinear;
mod grid;
mod norm;
mod state;
mod symbol;
mod witness;

pub use bilinear::apply_bilinear_multiplier;
pub use grid::Grid;
pub use norm::{boundary_mass_fraction, norm, NormSpec, NormValue};
pub use state::{
    apply_linear_group, inverse_transform, transform, Band, SampledState, Spectrum, BAND_THRESHOLD,
};
pub use symbol::{BilinearSymbol, FreqBox, SupportRegion};
pub use witness::{make_witness, Witness, WitnessKind, GAUSSIAN_BAND};
