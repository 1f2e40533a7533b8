use super::state::SampledState;
use crate::error::{Error, Result};

/// Which norm to measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormSpec {
    /// `L^q`, `q ∈ [2, ∞]`; use `f64::INFINITY` for the sup norm.
    Lebesgue(f64),
    /// `L^{2,s}` with weight `⟨x⟩^s`, `s ≥ 0`.
    WeightedL2(f64),
}

impl NormSpec {
    pub fn lebesgue(q: f64) -> Result<Self> {
        if !(q >= 2.0) {
            return Err(Error::Domain(format!("q = {q} outside q ∈ [2, inf]")));
        }
        Ok(NormSpec::Lebesgue(q))
    }

    pub fn weighted(s: f64) -> Result<Self> {
        if !(s >= 0.0 && s.is_finite()) {
            return Err(Error::Domain(format!("s = {s} outside s ≥ 0")));
        }
        Ok(NormSpec::WeightedL2(s))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            NormSpec::Lebesgue(_) => "lebesgue",
            NormSpec::WeightedL2(_) => "weighted_l2",
        }
    }

    pub fn q(&self) -> f64 {
        match *self {
            NormSpec::Lebesgue(q) => q,
            NormSpec::WeightedL2(_) => 2.0,
        }
    }

    pub fn s(&self) -> f64 {
        match *self {
            NormSpec::Lebesgue(_) => 0.0,
            NormSpec::WeightedL2(s) => s,
        }
    }
}

/// A measured norm; `unreliable` is set when the state has mass near the periodic boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormValue {
    pub value: f64,
    pub unreliable: bool,
}

/// Fraction of `|u|²` outside the central half of the period.
pub fn boundary_mass_fraction(state: &SampledState) -> f64 {
    let quarter = state.grid().length() / 4.0;
    let mut total = 0.0;
    let mut outer = 0.0;
    for (x, v) in state.grid().positions().zip(state.values()) {
        let w = v.norm_sqr();
        total += w;
        if x.abs() > quarter {
            outer += w;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        outer / total
    }
}

pub fn norm(state: &SampledState, spec: NormSpec) -> NormValue {
    let dx = state.grid().spacing();
    let v = state.values();
    match spec {
        NormSpec::Lebesgue(q) if q.is_infinite() => NormValue {
            value: v.iter().map(|u| u.norm()).fold(0.0, f64::max),
            unreliable: false,
        },
        NormSpec::Lebesgue(q) if q == 2.0 => {
            NormValue { value: state.l2(), unreliable: false }
        }
        NormSpec::Lebesgue(q) => {
            // scale by the max first so large q cannot overflow
            let peak = v.iter().map(|u| u.norm()).fold(0.0, f64::max);
            if peak == 0.0 {
                return NormValue { value: 0.0, unreliable: false };
            }
            let sum: f64 = v.iter().map(|u| (u.norm() / peak).powf(q)).sum();
            NormValue { value: peak * (dx * sum).powf(1.0 / q), unreliable: false }
        }
        NormSpec::WeightedL2(s) => {
            let sum: f64 = state
                .grid()
                .positions()
                .zip(v)
                .map(|(x, u)| (1.0 + x * x).powf(s) * u.norm_sqr())
                .sum();
            NormValue {
                value: (dx * sum).sqrt(),
                unreliable: boundary_mass_fraction(state) > 1e-6,
            }
        }
    }
}
