use std::f64::consts::PI;

use num_complex::Complex64;

use super::fit::{fit_decay, FitModel, FitResult};
use crate::error::{Error, Result};
use crate::smooth;
use crate::spectral::{
    apply_bilinear_multiplier, inverse_transform, make_witness, norm, BilinearSymbol, FreqBox,
    Grid, NormSpec, Spectrum, SupportRegion, WitnessKind,
};

/// Tolerance on the fitted ε-slopes.
pub const SCALING_TOLERANCE: f64 = 0.15;
const MAX_POINTS: usize = 1 << 20;
const CENTER: (f64, f64) = (0.4, 0.3);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalingFamily {
    /// Symbol on a ball of radius ε.
    Ball,
    /// Symbol on an ε-tube around a non-characteristic line.
    CurveNonchar,
    /// Symbol on an ε-tube around a circle.
    CurveCurvature,
    /// Non-characteristic tube with weighted data.
    CurveNoncharWeighted,
    /// Frequency truncation to an interval of length ε.
    IntervalTruncation,
}

impl ScalingFamily {
    pub const ALL: [ScalingFamily; 5] = [
        ScalingFamily::Ball,
        ScalingFamily::CurveNonchar,
        ScalingFamily::CurveCurvature,
        ScalingFamily::CurveNoncharWeighted,
        ScalingFamily::IntervalTruncation,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            ScalingFamily::Ball => "ball",
            ScalingFamily::CurveNonchar => "curve_nonchar",
            ScalingFamily::CurveCurvature => "curve_curvature",
            ScalingFamily::CurveNoncharWeighted => "curve_nonchar_weighted",
            ScalingFamily::IntervalTruncation => "interval_truncation",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.tag() == tag)
    }
}

/// The power of ε in the operator bound for `(q, s)`.
pub fn lemma_exponent(family: ScalingFamily, q: f64, s: f64) -> Result<f64> {
    if !(q >= 2.0) {
        return Err(Error::Domain(format!("q ∈ [2, inf] required, got {q}")));
    }
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::Domain(format!("s ≥ 0 required, got {s}")));
    }
    let iq = if q.is_infinite() { 0.0 } else { 1.0 / q };
    let unweighted = |e: f64| {
        if s == 0.0 {
            Ok(e)
        } else {
            Err(Error::Domain(format!("{} is stated for s = 0", family.tag())))
        }
    };
    match family {
        ScalingFamily::Ball if s < 0.5 => Ok(1.0 - iq + 2.0 * s),
        ScalingFamily::Ball if s > 0.5 => Ok(2.0 - iq),
        ScalingFamily::Ball => Err(Error::Domain("ball: s = 1/2 is not covered".into())),
        ScalingFamily::CurveNonchar => unweighted(1.0 - iq),
        ScalingFamily::CurveCurvature => unweighted(0.75 - 0.5 * iq),
        ScalingFamily::CurveNoncharWeighted if s < 0.25 => Ok(1.0 - iq + 4.0 * s * iq),
        ScalingFamily::CurveNoncharWeighted if s > 0.25 => Ok(1.0),
        ScalingFamily::CurveNoncharWeighted => {
            Err(Error::Domain("curve_nonchar_weighted: s = 1/4 is not covered".into()))
        }
        ScalingFamily::IntervalTruncation if s < 0.5 => Ok(s),
        ScalingFamily::IntervalTruncation => {
            Err(Error::Domain("interval_truncation needs s < 1/2".into()))
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScalingResult {
    pub family: ScalingFamily,
    pub q: f64,
    pub s: f64,
    pub epsilons: Vec<f64>,
    pub ratios: Vec<f64>,
    pub fit: FitResult,
    pub lemma_exponent: f64,
    /// Fitted slope no smaller than the lemma's exponent (minus tolerance).
    pub upper_respected: bool,
    /// Fitted slope minus the lemma's exponent; small for saturating witnesses.
    pub sharpness_gap: f64,
}

fn scaling_grid(eps_min: f64) -> Result<Grid> {
    // four bins across the smallest ε, and a Nyquist frequency well above the test region
    let length = (8.0 * PI / eps_min).max(256.0);
    let dx = PI / 4.0;
    let mut n = 256usize;
    while length / n as f64 > dx {
        n *= 2;
        if n > MAX_POINTS {
            return Err(Error::Resolution {
                what: "ε below grid resolution".into(),
                value: eps_min,
                limit: 8.0 * PI * 4.0 / (MAX_POINTS as f64 * dx),
            });
        }
    }
    Grid::new(n, length)
}

fn tube_symbol(family: ScalingFamily, eps: f64) -> BilinearSymbol {
    let (xc, yc) = CENTER;
    let radius = 1.0;
    let support = SupportRegion::Rectangle(FreqBox::centered(CENTER, radius));
    match family {
        ScalingFamily::CurveCurvature => {
            // unit circle through the center, normal (cos 30°, sin 30°) there
            let (cx, cy) = (xc - 0.75f64.sqrt(), yc - 0.5);
            BilinearSymbol::new(support, 1.0, "circle tube", move |xi, eta| {
                let d = ((xi - cx).hypot(eta - cy) - 1.0).abs();
                let r = (xi - xc).hypot(eta - yc);
                Complex64::new(smooth::plateau(d / eps, 0.5) * smooth::plateau(r / radius, 0.8), 0.0)
            })
        }
        _ => {
            // line through the center with normal (2, −1)/√5: neither axis nor anti-diagonal
            BilinearSymbol::new(support, 1.0, "line tube", move |xi, eta| {
                let d = (2.0 * (xi - xc) - (eta - yc)).abs() / 5f64.sqrt();
                let r = (xi - xc).hypot(eta - yc);
                Complex64::new(smooth::plateau(d / eps, 0.5) * smooth::plateau(r / radius, 0.8), 0.0)
            })
        }
    }
}

fn bilinear_ratio(family: ScalingFamily, eps: f64, q: f64, s: f64, grid: &Grid) -> Result<f64> {
    let m = match family {
        ScalingFamily::Ball => BilinearSymbol::disk_bump(CENTER, eps, 0.5),
        _ => tube_symbol(family, eps),
    };
    // saturating data: flat spectra on ε-intervals at the symbol's center point
    let f = make_witness(WitnessKind::FlatSpectrum, 0.0, CENTER.0, eps, grid)?;
    let g = make_witness(WitnessKind::FlatSpectrum, 0.0, CENTER.1, eps, grid)?;
    let out = apply_bilinear_multiplier(&m, &f.spectrum, &g.spectrum)?;
    let u = inverse_transform(&out, 2)?;
    let data = |w: &crate::spectral::Witness| {
        if s == 0.0 {
            w.state.l2()
        } else {
            norm(&w.state, NormSpec::WeightedL2(s)).value
        }
    };
    Ok(norm(&u, NormSpec::Lebesgue(q)).value / (data(&f) * data(&g)))
}

/// `|ξ − ξc|^{s − 1/2 + 0.01}` near `ξc`: just inside `L^{2,s}`, so it saturates the truncation bound.
fn truncation_ratio(eps: f64, s: f64, grid: &Grid) -> Result<f64> {
    let dk = grid.frequency_step();
    // the singularity sits between bins
    let xc = CENTER.0 + 0.5 * dk;
    let alpha = s - 0.5 + 0.01;
    let f = Spectrum::from_fn(*grid, |xi| {
        let d = (xi - xc).abs();
        Complex64::new(d.powf(alpha) * smooth::plateau(d, 0.5), 0.0)
    })?;
    let state = inverse_transform(&f, 1)?;
    let data = norm(&state, NormSpec::WeightedL2(s)).value;
    // smooth π_I: one on I (length ε), supported on 2I
    let cut = f.multiplied(|xi| Complex64::new(smooth::plateau((xi - xc).abs() / eps, 0.5), 0.0));
    Ok(cut.l2() / data)
}

/// Measures `‖T_σ(f, g)‖_q / (‖f‖‖g‖)` (or `‖π_I f‖₂/‖f‖`) over ε and fits the slope in log ε.
pub fn multiplier_scaling_experiment(
    family: ScalingFamily,
    epsilons: &[f64],
    q: f64,
    s: f64,
) -> Result<ScalingResult> {
    let expo = lemma_exponent(family, q, s)?;
    let eps_min = epsilons.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(eps_min > 0.0) {
        return Err(Error::Domain("ε must be positive".into()));
    }
    let grid = scaling_grid(eps_min)?;
    if eps_min < 4.0 * grid.frequency_step() {
        return Err(Error::Resolution {
            what: "ε".into(),
            value: eps_min,
            limit: 4.0 * grid.frequency_step(),
        });
    }
    let ratios = epsilons
        .iter()
        .map(|&e| match family {
            ScalingFamily::IntervalTruncation => truncation_ratio(e, s, &grid),
            _ => bilinear_ratio(family, e, q, s, &grid),
        })
        .collect::<Result<Vec<f64>>>()?;
    let fit = fit_decay(epsilons, &ratios, FitModel::Power)?;
    let slope = fit.fitted_exponent;
    Ok(ScalingResult {
        family,
        q,
        s,
        epsilons: epsilons.to_vec(),
        ratios,
        fit,
        lemma_exponent: expo,
        upper_respected: slope >= expo - SCALING_TOLERANCE,
        sharpness_gap: slope - expo,
    })
}
