use std::f64::consts::PI;

use nalgebra::Matrix3;
use num_complex::Complex64;

use super::evolve::{evolve, evolve_unchecked};
use super::scenario::Scenario;
use crate::error::{Error, Result};
use crate::geometry::{eval_phase, Phase, ResonantPoint};
use crate::oscillatory::{fresnel_g1, fresnel_g2, special_constants};
use crate::spectral::{
    apply_bilinear_multiplier, apply_linear_group, inverse_transform, norm, BilinearSymbol,
    NormSpec, Spectrum,
};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Below this `min |φ|` on the support the division by φ is refused.
pub const PHASE_FLOOR: f64 = 1e-8;
/// Default half-width in Σ of the edge windows.
pub const PROFILE_EPS: f64 = 0.1;

/// The exact identity `u = −T_{m/φ}(e^{itb}f, e^{itc}g) + e^{ita}T_{m/φ}(f, g)`, term by term.
#[derive(Debug, Clone)]
pub struct NoResonancePrediction {
    pub full: Spectrum,
    pub transient: Spectrum,
    /// `e^{ita(D)} F` with `F = T_{m/φ}(f, g)`.
    pub asymptotic: Spectrum,
}

pub fn divided_symbol(sc: &Scenario) -> Result<BilinearSymbol> {
    let (phi_min, _) = sc.phase_range_on_support();
    if phi_min <= PHASE_FLOOR {
        return Err(Error::Hypothesis(format!(
            "φ vanishes on the symbol support (min |φ| = {phi_min:.3e})"
        )));
    }
    let tr = sc.triple;
    Ok(sc.symbol.map(sc.symbol.sup_bound() / phi_min, "m/φ", move |xi, eta, v| {
        v / (tr.b.eval(xi) + tr.c.eval(eta) - tr.a.eval(xi + eta))
    }))
}

pub fn predict_no_time_resonance(sc: &Scenario, t: f64) -> Result<NoResonancePrediction> {
    let q = divided_symbol(sc)?;
    sc.check_wrap(t)?;
    let f = apply_linear_group(sc.f_hat(), &sc.triple.b, t);
    let g = apply_linear_group(sc.g_hat(), &sc.triple.c, t);
    let transient = apply_bilinear_multiplier(&q, &f, &g)?.scaled(Complex64::new(-1.0, 0.0));
    let big_f = apply_bilinear_multiplier(&q, sc.f_hat(), sc.g_hat())?;
    let asymptotic = apply_linear_group(&big_f, &sc.triple.a, t);
    let full = transient.add(&asymptotic)?;
    Ok(NoResonancePrediction { full, transient, asymptotic })
}

/// `e^{ita(D)} F` with `F = −i ∫₀^M e^{−isa(D)} T_m(e^{isb}f, e^{isc}g) ds`, integrated in closed form.
pub fn predict_truncated_duhamel(sc: &Scenario, t: f64, m: f64) -> Result<Spectrum> {
    if !(m >= 0.0 && m.is_finite()) {
        return Err(Error::Domain(format!("truncation time must be non-negative, got {m}")));
    }
    let (d_min, _) = sc.space_field_range_on_support();
    if d_min <= 1e-6 {
        return Err(Error::Hypothesis(format!(
            "Δ meets the symbol support (min |(∂ξ−∂η)φ| = {d_min:.3e})"
        )));
    }
    sc.check_wrap(t.max(m))?;
    let head = evolve_unchecked(sc, m)?;
    Ok(apply_linear_group(&head, &sc.triple.a, t - m))
}

/// `√t·‖u(t) − e^{ita(D)}F_M‖_∞` in physical space.
pub fn truncation_residual(sc: &Scenario, t: f64, m: f64, padding: usize) -> Result<f64> {
    let diff = evolve(sc, t)?.sub(&predict_truncated_duhamel(sc, t, m)?)?;
    let state = inverse_transform(&diff, padding)?;
    Ok(t.sqrt() * norm(&state, NormSpec::Lebesgue(f64::INFINITY)).value)
}

/// The five X-regimes, named by where Σ(X) falls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProfileRegion {
    /// Σ < −ε̃: fast decay.
    BeforeStart,
    /// |Σ| ≤ ε̃: Fresnel-type G₂ edge, size t^{−1/4}.
    NearStart,
    /// ε̃ < Σ < 1 − ε̃: size t^{−1/2}, explicit constant.
    Interior,
    /// |Σ − 1| ≤ ε̃: Fresnel G₁ edge, size t^{−1/2}.
    NearEnd,
    /// Σ > 1 + ε̃: fast decay.
    AfterEnd,
}

impl ProfileRegion {
    pub fn of(sigma: f64, eps: f64) -> Self {
        if sigma < -eps {
            Self::BeforeStart
        } else if sigma <= eps {
            Self::NearStart
        } else if sigma < 1.0 - eps {
            Self::Interior
        } else if sigma <= 1.0 + eps {
            Self::NearEnd
        } else {
            Self::AfterEnd
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Self::BeforeStart => "fast_decay_before",
            Self::NearStart => "near_sigma_0",
            Self::Interior => "interior",
            Self::NearEnd => "near_sigma_1",
            Self::AfterEnd => "fast_decay_after",
        }
    }

    /// Power of t in the claimed remainder (`−∞` for the fast-decay regions).
    pub fn error_order(&self) -> f64 {
        match self {
            Self::BeforeStart | Self::AfterEnd => f64::NEG_INFINITY,
            Self::NearStart => -0.75,
            Self::Interior | Self::NearEnd => -1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProfilePrediction {
    pub t: f64,
    pub x_grid: Vec<f64>,
    pub sigma: Vec<f64>,
    pub region: Vec<ProfileRegion>,
    /// Leading term per X. Edge regimes use the envelopes matched to the interior constant.
    pub amplitude: Vec<Complex64>,
    pub error_order: Vec<f64>,
    pub point: ResonantPoint,
    pub a1: Complex64,
    pub signature: i32,
    pub a0: f64,
    pub a2: f64,
    /// Scale of the Fresnel argument near Σ = 0 and Σ = 1.
    pub kappa0: f64,
    pub kappa1: f64,
    pub eps: f64,
}

impl ProfilePrediction {
    pub fn modulus(&self) -> Vec<f64> {
        self.amplitude.iter().map(|a| a.norm()).collect()
    }
}

/// Σ(X) = −(a′(ξ₀) + X)/Φ_ξ(ξ₀, η₀).
pub fn sigma_of(sc: &Scenario, p: &ResonantPoint, x: f64) -> f64 {
    -(sc.triple.a.d1(p.xi0) + x) / p.phi_xi
}

/// Inverse of [`sigma_of`].
pub fn x_of_sigma(sc: &Scenario, p: &ResonantPoint, sigma: f64) -> f64 {
    -sigma * p.phi_xi - sc.triple.a.d1(p.xi0)
}

/// Hessian of ψ = a(ξ) + σΦ(ξ, η) + Xξ in (ξ, η, σ) at the resonant point.
pub fn psi_hessian(sc: &Scenario, p: &ResonantPoint, sigma: f64) -> Matrix3<f64> {
    let bp = |o| eval_phase(&sc.triple, Phase::BigPhi, (p.xi0, p.eta0), o);
    let a2 = sc.triple.a.d2(p.xi0);
    let (fx, fy) = (bp((1, 0, 0)), bp((0, 1, 0)));
    let (fxx, fxy, fyy) = (bp((2, 0, 0)), bp((1, 1, 0)), bp((0, 2, 0)));
    Matrix3::new(
        a2 + sigma * fxx, sigma * fxy, fx,
        sigma * fxy, sigma * fyy, fy,
        fx, fy, 0.0,
    )
}

pub fn signature(h: &Matrix3<f64>) -> i32 {
    let scale = h.abs().max().max(1.0);
    h.symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|&l| {
            if l > 1e-12 * scale {
                1
            } else if l < -1e-12 * scale {
                -1
            } else {
                0
            }
        })
        .sum()
}

/// `A₁ = −i√(2π) e^{iπS/4} μ(ξ₀,η₀) f̂(ξ₀−η₀) ĝ(η₀) / (|Φ_ξ| √|Φ_ηη|)` in the unitary normalization.
pub fn interior_constant(sc: &Scenario, p: &ResonantPoint, s: i32) -> Complex64 {
    let (x, y) = p.phi_coords();
    let data = sc.symbol.eval(x, y) * sc.f_hat().value_at(x) * sc.g_hat().value_at(y);
    -I * (2.0 * PI).sqrt() * Complex64::from_polar(1.0, PI * s as f64 / 4.0) * data
        / (p.phi_xi.abs() * p.phi_etaeta.abs().sqrt())
}

/// Second derivative in σ of the phase reduced over (ξ, η), at the resonant point.
fn reduced_curvature(sc: &Scenario, p: &ResonantPoint, sigma: f64) -> f64 {
    let bp = |o| eval_phase(&sc.triple, Phase::BigPhi, (p.xi0, p.eta0), o);
    let (fxx, fxy, fyy) = (bp((2, 0, 0)), bp((1, 1, 0)), bp((0, 2, 0)));
    let denom = sc.triple.a.d2(p.xi0) + sigma * (fxx - fxy * fxy / fyy);
    -p.phi_xi * p.phi_xi / denom
}

pub fn predict_profile(sc: &Scenario, t: f64, x_grid: &[f64]) -> Result<ProfilePrediction> {
    predict_profile_with(sc, t, x_grid, PROFILE_EPS)
}

pub fn predict_profile_with(
    sc: &Scenario,
    t: f64,
    x_grid: &[f64],
    eps: f64,
) -> Result<ProfilePrediction> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("profile time must be positive, got {t}")));
    }
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::Domain(format!("window half-width must lie in (0, 1/2), got {eps}")));
    }
    let p = sc.resonant_point()?;
    if p.phi_etaeta.abs() < 1e-9 || p.phi_xi.abs() < 1e-9 {
        return Err(Error::Hypothesis("degenerate resonant point".into()));
    }
    let (x0, y0) = p.phi_coords();
    if (sc.f_hat().value_at(x0) * sc.g_hat().value_at(y0)).norm()
        <= 1e-8 * sc.f_hat().peak() * sc.g_hat().peak()
    {
        return Err(Error::Hypothesis("data vanish at the resonant point".into()));
    }
    let s = signature(&psi_hessian(sc, &p, 0.5));
    let a1 = interior_constant(sc, &p, s);
    let kappa0 = (0.5 * reduced_curvature(sc, &p, 0.0).abs()).sqrt();
    let kappa1 = (0.5 * reduced_curvature(sc, &p, 1.0).abs()).sqrt();
    // envelopes chosen so each edge form matches the interior term as it enters the interior
    let a0 = a1.norm() * kappa0.sqrt() / PI.sqrt();
    let a2 = a1.norm() / special_constants().c0.norm();
    let st = t.sqrt();
    let a_of = |xi: f64| sc.triple.a.eval(xi);

    let mut sigma = Vec::with_capacity(x_grid.len());
    let mut region = Vec::with_capacity(x_grid.len());
    let mut amplitude = Vec::with_capacity(x_grid.len());
    let mut error_order = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        let sg = sigma_of(sc, &p, x);
        let r = ProfileRegion::of(sg, eps);
        let amp = match r {
            ProfileRegion::BeforeStart | ProfileRegion::AfterEnd => Complex64::new(0.0, 0.0),
            ProfileRegion::Interior => {
                // ψ at the stationary point: a(ξ₀) + Xξ₀, since Φ vanishes there
                let psi = a_of(p.xi0) + x * p.xi0;
                a1 / (t * sg).sqrt() * Complex64::from_polar(1.0, t * psi)
            }
            ProfileRegion::NearStart => a0 * t.powf(-0.25) * fresnel_g2(-kappa0 * st * sg),
            ProfileRegion::NearEnd => a2 / st * fresnel_g1(kappa1 * st * (sg - 1.0)),
        };
        sigma.push(sg);
        region.push(r);
        amplitude.push(amp);
        error_order.push(r.error_order());
    }
    Ok(ProfilePrediction {
        t,
        x_grid: x_grid.to_vec(),
        sigma,
        region,
        amplitude,
        error_order,
        point: p,
        a1,
        signature: s,
        a0,
        a2,
        kappa0,
        kappa1,
        eps,
    })
}
