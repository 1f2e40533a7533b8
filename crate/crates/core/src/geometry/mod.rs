//! Phases, resonance sets Γ and Δ, space-time resonant points and their classification.

mod classify;
mod phase;
mod points;
mod trace;

pub use classify::{characteristic_points, classify, CharDirection, CharacteristicPoint, GammaClass};
pub use phase::{eval_phase, space_field, DispersionTriple, Phase, PhaseJet};
pub use points::{find_spacetime_points, IsolatedZero, ResonantPoint};
pub use trace::{polish_on_segment, trace_zero_set, Polyline, TRACE_TOLERANCE};

use crate::error::{Error, Result};
use crate::spectral::{FreqBox, SupportRegion};

/// Traced Γ and Δ on a box (φ-coordinates), with whatever has been derived from them so far.
#[derive(Debug, Clone)]
pub struct ResonanceGeometry {
    pub bx: FreqBox,
    pub resolution: usize,
    pub gamma: Vec<Polyline>,
    pub delta: Vec<Polyline>,
    /// Zeros of φ that are isolated critical points (not on any traced curve).
    pub isolated: Vec<IsolatedZero>,
    pub points: Vec<ResonantPoint>,
    pub characteristic_points: Vec<CharacteristicPoint>,
    pub classification: Option<GammaClass>,
}

impl ResonanceGeometry {
    pub fn gamma_big_phi(&self) -> Vec<Polyline> {
        self.gamma.iter().map(Polyline::to_big_phi).collect()
    }

    pub fn delta_big_phi(&self) -> Vec<Polyline> {
        self.delta.iter().map(Polyline::to_big_phi).collect()
    }

    pub fn gamma_vertices(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.gamma.iter().flat_map(|l| l.vertices.iter().copied())
    }
}

pub const MIN_RESOLUTION: usize = 64;

pub fn trace_resonance_sets(
    triple: &DispersionTriple,
    bx: FreqBox,
    resolution: usize,
) -> Result<ResonanceGeometry> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::Config(format!(
            "trace resolution {resolution} below the minimum {MIN_RESOLUTION}"
        )));
    }
    let phi = |p: (f64, f64)| eval_phase(triple, Phase::Phi, p, (0, 0, 0));
    let delta_field = |p: (f64, f64)| space_field(triple, p);
    let gamma = trace_zero_set(bx, resolution, &phi)?;
    let delta = trace_zero_set(bx, resolution, &delta_field)?;
    let isolated = points::isolated_zeros(triple, bx, resolution);
    Ok(ResonanceGeometry {
        bx,
        resolution,
        gamma,
        delta,
        isolated,
        points: Vec::new(),
        characteristic_points: Vec::new(),
        classification: None,
    })
}

/// Traces on the support's bounding box, then fills points, characteristic points and the class.
pub fn analyze(
    triple: &DispersionTriple,
    support: SupportRegion,
    resolution: usize,
) -> Result<ResonanceGeometry> {
    let mut geom = trace_resonance_sets(triple, support.bounding_box(), resolution)?;
    geom.points = find_spacetime_points(&geom, triple);
    geom.characteristic_points = characteristic_points(&geom, triple);
    geom.classification = Some(classify(&geom, triple, support)?);
    Ok(geom)
}
