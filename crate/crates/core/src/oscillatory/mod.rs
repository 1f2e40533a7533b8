//! Fresnel-type functions G₁, G₂, boundary stationary-phase leading terms and a quadrature oracle.

mod integral;
mod quad;
mod reference;
mod special;

pub use integral::{
    leading_term, oracle_integral, stationary_point, Amplitude, LeadingCase, LeadingTerm,
    OracleValue, OscIntegralSpec, Weight, ORACLE_TARGET,
};
pub use reference::{reference_cases, ReferenceCase, ReferenceRow};
pub use quad::{gauss_legendre, gl_panel, ibp_tail, panel_sum, phase_panels, Jet};
pub use special::{
    c0_exact, c_plus_exact, fresnel_g1, fresnel_g1_quadrature, fresnel_g2, fresnel_g2_quadrature,
    g1_leading, g2_leading, special_constants, SpecialConstants, SERIES_CUTOFF,
};
