//! The inhomogeneous solution `u(t) = T_t(f, g)` by two routes, and the asymptotic predictors.

mod evolve;
mod predict;
mod scenario;

pub use evolve::{duhamel_symbol, evolve, evolve_quadrature, min_quadrature_steps, time_kernel};
pub use predict::{
    divided_symbol, interior_constant, predict_no_time_resonance, predict_profile,
    predict_profile_with, predict_truncated_duhamel, psi_hessian, signature, sigma_of,
    truncation_residual, x_of_sigma, NoResonancePrediction, ProfilePrediction, ProfileRegion,
    PHASE_FLOOR, PROFILE_EPS,
};
pub use scenario::{required_length, DataSpec, Scenario};

use rayon::prelude::*;

use crate::error::Result;
use crate::spectral::{inverse_transform, norm, NormSpec, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    SymbolForm,
    TimeQuadrature,
}

#[derive(Debug, Clone)]
pub struct EvolutionResult {
    pub times: Vec<f64>,
    pub spectra: Vec<Spectrum>,
    /// One row per requested norm, one entry per time.
    pub norm_table: Vec<(NormSpec, Vec<f64>)>,
    pub method: Method,
}

/// Norms of the reconstructed state, sampled with `padding`× zero-padding.
pub fn state_norms(spec: &Spectrum, norms: &[NormSpec], padding: usize) -> Result<Vec<f64>> {
    let state = inverse_transform(spec, padding)?;
    Ok(norms.iter().map(|&n| norm(&state, n).value).collect())
}

/// Evolves to each time and tabulates the requested norms. Times run in parallel.
pub fn evolution_table(
    sc: &Scenario,
    times: &[f64],
    norms: &[NormSpec],
    method: Method,
    padding: usize,
) -> Result<EvolutionResult> {
    let rows: Result<Vec<(Spectrum, Vec<f64>)>> = times
        .par_iter()
        .map(|&t| {
            let spec = match method {
                Method::SymbolForm => evolve(sc, t)?,
                Method::TimeQuadrature => {
                    let n = 2 * min_quadrature_steps(sc, t).div_ceil(2).max(2);
                    evolve_quadrature(sc, t, n)?
                }
            };
            let values = state_norms(&spec, norms, padding)?;
            Ok((spec, values))
        })
        .collect();
    let rows = rows?;
    let norm_table = norms
        .iter()
        .enumerate()
        .map(|(i, &n)| (n, rows.iter().map(|r| r.1[i]).collect()))
        .collect();
    Ok(EvolutionResult {
        times: times.to_vec(),
        spectra: rows.into_iter().map(|r| r.0).collect(),
        norm_table,
        method,
    })
}

/// Runs every `(scenario, t)` pair; results come back sorted by `(label, t)`.
pub fn evolve_batch<'a>(jobs: &[(&'a Scenario, f64)]) -> Vec<(&'a str, f64, Result<Spectrum>)> {
    let mut out: Vec<_> = jobs
        .par_iter()
        .map(|&(sc, t)| (sc.label.as_str(), t, evolve(sc, t)))
        .collect();
    out.sort_by(|a, b| a.0.cmp(b.0).then(a.1.total_cmp(&b.1)));
    out
}

#[cfg(test)]
mod tests;
