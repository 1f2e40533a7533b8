use num_complex::Complex64;

use super::quad::{panel_sum, phase_panels};
use super::special::{c0_exact, fresnel_g1, fresnel_g2};
use crate::dispersion::DispersionRelation;
use crate::error::{Error, Result};
use crate::smooth;

/// Smooth compactly supported amplitude `χ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Amplitude {
    Zero,
    /// `bump((σ − center)/radius)`
    Bump { center: f64, radius: f64 },
    /// `plateau(σ/radius, inner)`, equal to 1 near 0.
    Plateau { radius: f64, inner: f64 },
}

impl Amplitude {
    pub fn eval(&self, s: f64) -> f64 {
        match *self {
            Amplitude::Zero => 0.0,
            Amplitude::Bump { center, radius } => smooth::bump((s - center) / radius),
            Amplitude::Plateau { radius, inner } => smooth::plateau(s / radius, inner),
        }
    }

    /// Closed support interval, `None` for the zero amplitude.
    pub fn support(&self) -> Option<(f64, f64)> {
        match *self {
            Amplitude::Zero => None,
            Amplitude::Bump { center, radius } => Some((center - radius, center + radius)),
            Amplitude::Plateau { radius, .. } => Some((-radius, radius)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weight {
    None,
    /// `1/√σ`
    InvSqrtSigma,
    /// `1/√(σ − ε)`
    InvSqrtSigmaMinusEps(f64),
}

impl Weight {
    fn singularity(&self) -> Option<f64> {
        match *self {
            Weight::None => None,
            Weight::InvSqrtSigma => Some(0.0),
            Weight::InvSqrtSigmaMinusEps(e) => Some(e),
        }
    }
}

/// `∫_{lower}^∞ e^{itζ(σ)} χ(σ) w(σ) dσ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscIntegralSpec {
    pub phase: DispersionRelation,
    pub amplitude: Amplitude,
    pub weight: Weight,
    pub t: f64,
    pub lower_limit: f64,
}

/// Target absolute accuracy of the oracle.
pub const ORACLE_TARGET: f64 = 1e-9;

/// Oracle value with its panel-halving error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue {
    pub value: Complex64,
    pub error_estimate: f64,
}

/// Brute-force panel quadrature. A weight singularity at the lower limit is removed by
/// `σ = lower + τ²`; panels resolve the phase to `π/4` each; the result is accepted only when
/// halving every panel changes it by at most the target.
pub fn oracle_integral(spec: &OscIntegralSpec) -> Result<OracleValue> {
    if !(spec.t > 0.0 && spec.t <= 1e5) {
        return Err(Error::Domain(format!("oracle needs 0 < t ≤ 1e5, got {}", spec.t)));
    }
    let zero = OracleValue { value: Complex64::new(0.0, 0.0), error_estimate: 0.0 };
    let Some((s_lo, s_hi)) = spec.amplitude.support() else {
        return Ok(zero);
    };
    let lower = spec.lower_limit;
    if let Some(s) = spec.weight.singularity() {
        if lower < s {
            return Err(Error::Domain(format!(
                "weight singularity at {s} lies inside the integration range starting at {lower}"
            )));
        }
    }
    let a = lower.max(s_lo);
    let b = s_hi;
    if b <= a {
        return Ok(zero);
    }
    let t = spec.t;
    let zeta = spec.phase;
    let chi = spec.amplitude;
    let weight = spec.weight;
    let singular_at_lower = weight.singularity() == Some(lower);
    let smooth_weight = move |s: f64| match weight {
        Weight::None => 1.0,
        Weight::InvSqrtSigma => 1.0 / s.sqrt(),
        Weight::InvSqrtSigmaMinusEps(e) => 1.0 / (s - e).sqrt(),
    };
    // integrate in τ with σ = lower + τ² when singular, otherwise directly in σ
    let (t_lo, t_hi) = if singular_at_lower { ((a - lower).sqrt(), (b - lower).sqrt()) } else { (a, b) };
    let map = move |u: f64| if singular_at_lower { lower + u * u } else { u };
    let integrand = move |u: f64| {
        let s = map(u);
        let jac_w = if singular_at_lower { 2.0 } else { smooth_weight(s) };
        Complex64::from_polar(chi.eval(s) * jac_w, t * zeta.eval(s))
    };
    let speed = move |u: f64| {
        let ds = if singular_at_lower { 2.0 * u.abs() } else { 1.0 };
        t * zeta.d1(map(u)).abs() * ds
    };
    let max_width = (t_hi - t_lo) / 128.0;
    let edges = phase_panels(t_lo, t_hi, std::f64::consts::FRAC_PI_4, max_width, &speed);
    let (coarse, fine) = panel_sum(&integrand, &edges);
    let estimate = (fine - coarse).norm();
    if estimate > ORACLE_TARGET {
        return Err(Error::Accuracy { estimate, target: ORACLE_TARGET });
    }
    Ok(OracleValue { value: fine, error_estimate: estimate })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeadingCase {
    B2i,
    B2ii,
    B2iii,
    B2iv,
    B3i,
    B3ii,
    B3iii,
}

impl LeadingCase {
    pub fn name(&self) -> &'static str {
        match self {
            LeadingCase::B2i => "B2_i",
            LeadingCase::B2ii => "B2_ii",
            LeadingCase::B2iii => "B2_iii",
            LeadingCase::B2iv => "B2_iv",
            LeadingCase::B3i => "B3_i",
            LeadingCase::B3ii => "B3_ii",
            LeadingCase::B3iii => "B3_iii",
        }
    }
}

/// Leading term, the claimed remainder exponent in `t`, and the remainder scale of the active
/// branch (`t^{order}` or, for the split cases, the branch expression itself).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeadingTerm {
    pub value: Complex64,
    pub claimed_error_order: f64,
    pub branch_scale: f64,
    /// For the split cases, whether `|√t·ε| < 1`.
    pub inner_branch: Option<bool>,
}

fn is_monomial(p: &DispersionRelation, k: usize) -> bool {
    p.coefficients().iter().enumerate().all(|(j, &c)| if j == k { c == 1.0 } else { c == 0.0 })
}

fn working_interval(spec: &OscIntegralSpec) -> Result<(f64, f64)> {
    let (lo, hi) = spec
        .amplitude
        .support()
        .ok_or_else(|| Error::Hypothesis("amplitude vanishes identically".into()))?;
    let a = lo.max(spec.lower_limit);
    if hi <= a {
        return Err(Error::Hypothesis("amplitude support lies below the lower limit".into()));
    }
    Ok((a, hi))
}

/// Root of `ζ′` by Newton with bisection fallback on a bracketing scan of `[lo, hi]`.
pub fn stationary_point(zeta: &DispersionRelation, lo: f64, hi: f64) -> Option<f64> {
    let n = 256;
    let xs: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    for w in xs.windows(2) {
        let (fa, fb) = (zeta.d1(w[0]), zeta.d1(w[1]));
        if fa == 0.0 {
            return Some(w[0]);
        }
        if (fa > 0.0) != (fb > 0.0) || fb == 0.0 {
            let (mut a, mut b) = (w[0], w[1]);
            let mut x = 0.5 * (a + b);
            for _ in 0..200 {
                let f = zeta.d1(x);
                if f == 0.0 {
                    return Some(x);
                }
                if (f > 0.0) == (zeta.d1(a) > 0.0) {
                    a = x;
                } else {
                    b = x;
                }
                let d = zeta.d2(x);
                let newton = x - f / d;
                x = if d != 0.0 && newton > a && newton < b { newton } else { 0.5 * (a + b) };
                if (b - a) < 1e-12 || f.abs() < 1e-15 {
                    break;
                }
            }
            return Some(x);
        }
    }
    None
}

fn require_sign_of_d2(zeta: &DispersionRelation, lo: f64, hi: f64, positive_only: bool) -> Result<f64> {
    let (m, mx) = zeta.derivative_range(lo, hi, 2);
    if m > 0.0 {
        return Ok(1.0);
    }
    if !positive_only && mx < 0.0 {
        return Ok(-1.0);
    }
    Err(Error::Hypothesis(format!(
        "ζ″ {} on the amplitude support (range [{m:.3e}, {mx:.3e}])",
        if positive_only { "is not bounded below by a positive constant" } else { "changes sign" }
    )))
}

/// The endpoint term `χ(0) e^{itζ(0)} C₀/√(t|ζ′(0)|)` (conjugated for `ζ′(0) < 0`).
fn endpoint_term(zeta: &DispersionRelation, chi: &Amplitude, t: f64) -> Result<Complex64> {
    let d = zeta.d1(0.0);
    if d == 0.0 {
        return Err(Error::Hypothesis("ζ′(0) = 0 at the singular endpoint".into()));
    }
    let c0 = if d > 0.0 { c0_exact() } else { c0_exact().conj() };
    Ok(chi.eval(0.0) * Complex64::from_polar(1.0, t * zeta.eval(0.0)) * c0 / (t * d.abs()).sqrt())
}

pub fn leading_term(spec: &OscIntegralSpec, case: LeadingCase) -> Result<LeadingTerm> {
    let t = spec.t;
    let zeta = &spec.phase;
    let chi = &spec.amplitude;
    let (lo, hi) = working_interval(spec)?;
    let need_weight = |w: Weight| -> Result<()> {
        if spec.weight != w {
            return Err(Error::Hypothesis(format!(
                "case {} needs weight {w:?}, got {:?}",
                case.name(),
                spec.weight
            )));
        }
        Ok(())
    };
    let need_lower = |l: f64| -> Result<()> {
        if spec.lower_limit != l {
            return Err(Error::Hypothesis(format!(
                "case {} integrates from {l}, got {}",
                case.name(),
                spec.lower_limit
            )));
        }
        Ok(())
    };
    let plain = |value, order: f64| LeadingTerm {
        value,
        claimed_error_order: order,
        branch_scale: t.powf(order),
        inner_branch: None,
    };
    match case {
        LeadingCase::B2i => {
            need_weight(Weight::None)?;
            need_lower(0.0)?;
            require_sign_of_d2(zeta, lo, hi, true)?;
            let span = hi - lo;
            let s0 = stationary_point(zeta, lo - span, hi + span)
                .ok_or_else(|| Error::Hypothesis("ζ′ has no zero near the support".into()))?;
            let z0 = zeta.eval(s0);
            let y0 = -s0.signum() * (zeta.eval(0.0) - z0).max(0.0).sqrt();
            let value = chi.eval(s0) * (2.0 / zeta.d2(s0)).sqrt() * Complex64::from_polar(1.0, t * z0)
                * fresnel_g1(t.sqrt() * y0)
                / t.sqrt();
            Ok(plain(value, -1.0))
        }
        LeadingCase::B2ii => {
            need_weight(Weight::InvSqrtSigma)?;
            need_lower(0.0)?;
            if stationary_point(zeta, lo, hi).is_some() {
                return Err(Error::Hypothesis("ζ′ vanishes on the amplitude support".into()));
            }
            Ok(plain(endpoint_term(zeta, chi, t)?, -1.0))
        }
        LeadingCase::B2iii => {
            need_weight(Weight::InvSqrtSigma)?;
            need_lower(0.0)?;
            let rho = require_sign_of_d2(zeta, lo, hi, false)?;
            let s0 = stationary_point(zeta, lo, hi)
                .ok_or_else(|| Error::Hypothesis("ζ′ has no zero on the support".into()))?;
            if s0 <= 0.0 {
                return Err(Error::Hypothesis(format!("stationary point σ₀ = {s0} is not positive")));
            }
            let interior = (2.0 * std::f64::consts::PI).sqrt()
                * Complex64::from_polar(1.0, t * zeta.eval(s0) + rho * std::f64::consts::FRAC_PI_4)
                * chi.eval(s0)
                / (s0 * zeta.d2(s0).abs()).sqrt()
                / t.sqrt();
            Ok(plain(endpoint_term(zeta, chi, t)? + interior, -1.0))
        }
        LeadingCase::B2iv => {
            need_weight(Weight::InvSqrtSigma)?;
            need_lower(0.0)?;
            require_sign_of_d2(zeta, lo, hi, true)?;
            let span = hi - lo;
            let s0 = stationary_point(zeta, lo - span, hi + span)
                .ok_or_else(|| Error::Hypothesis("ζ′ has no zero near the support".into()))?;
            let z0 = zeta.eval(s0);
            let y0 = -s0.signum() * (zeta.eval(0.0) - z0).max(0.0).sqrt();
            let ds = if zeta.d1(0.0) == 0.0 {
                (2.0 / zeta.d2(0.0)).sqrt()
            } else {
                2.0 * y0.abs() / zeta.d1(0.0).abs()
            };
            let value = Complex64::from_polar(1.0, t * z0) * chi.eval(0.0) * ds.sqrt()
                * fresnel_g2(t.sqrt() * y0)
                / t.powf(0.25);
            Ok(split_branch(value, t, s0.abs()))
        }
        LeadingCase::B3i => {
            if !is_monomial(zeta, 2) {
                return Err(Error::Hypothesis("case B3_i needs ζ(σ) = σ²".into()));
            }
            need_weight(Weight::None)?;
            let eps = spec.lower_limit;
            Ok(plain(chi.eval(0.0) * fresnel_g1(t.sqrt() * eps) / t.sqrt(), -1.0))
        }
        LeadingCase::B3ii => {
            if !is_monomial(zeta, 1) {
                return Err(Error::Hypothesis("case B3_ii needs ζ(σ) = σ".into()));
            }
            need_weight(Weight::InvSqrtSigma)?;
            need_lower(0.0)?;
            Ok(plain(c0_exact() * chi.eval(0.0) / t.sqrt(), -1.0))
        }
        LeadingCase::B3iii => {
            if !is_monomial(zeta, 2) {
                return Err(Error::Hypothesis("case B3_iii needs ζ(σ) = σ²".into()));
            }
            let eps = spec.lower_limit;
            need_weight(Weight::InvSqrtSigmaMinusEps(eps))?;
            let value = chi.eval(0.0) * fresnel_g2(t.sqrt() * eps) / t.powf(0.25);
            Ok(split_branch(value, t, eps.abs()))
        }
    }
}

/// Remainder branch `t^{-3/4}` when `|√t·ε| < 1`, else `√(ε/t)`.
fn split_branch(value: Complex64, t: f64, eps: f64) -> LeadingTerm {
    let inner = (t.sqrt() * eps) < 1.0;
    if inner {
        LeadingTerm { value, claimed_error_order: -0.75, branch_scale: t.powf(-0.75), inner_branch: Some(true) }
    } else {
        LeadingTerm {
            value,
            claimed_error_order: -0.5,
            branch_scale: (eps / t).sqrt(),
            inner_branch: Some(false),
        }
    }
}
