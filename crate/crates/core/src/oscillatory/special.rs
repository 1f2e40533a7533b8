use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::OnceLock;

use num_complex::Complex64;

use super::quad::{ibp_tail, panel_sum, phase_panels};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `(1+i)/2·√(π/2)`, `∫₀^∞ e^{iσ²}`.
pub fn c_plus_exact() -> Complex64 {
    c(0.5, 0.5) * (PI / 2.0).sqrt()
}

/// `(1+i)√(π/2)`, `∫ℝ e^{iσ²}`.
pub fn c0_exact() -> Complex64 {
    c(1.0, 1.0) * (PI / 2.0).sqrt()
}

/// `C0`, `C+`, `C−` computed by quadrature, independently of the closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialConstants {
    pub c0: Complex64,
    pub c_plus: Complex64,
    pub c_minus: Complex64,
}

/// Switch point between quadrature and asymptotic series.
pub const SERIES_CUTOFF: f64 = 8.0;

/// `∫_R^∞ e^{iσ²}` by its asymptotic series `−e^{iR²} Σ (2k−1)!!/((2i)^{k+1} R^{2k+1})`,
/// summed until the terms stop decreasing.
fn fresnel_tail_series(r: f64) -> Complex64 {
    let mut sum = c(0.0, 0.0);
    let mut term = 1.0 / (2.0 * r); // |(2k−1)!!/(2^{k+1} R^{2k+1})|
    let mut k = 0usize;
    loop {
        sum += term / c(0.0, 1.0).powi(k as i32 + 1);
        let next = term * (2 * k + 1) as f64 / (2.0 * r * r);
        if next >= term || next < 1e-20 * sum.norm() || k > 200 {
            break;
        }
        term = next;
        k += 1;
    }
    -Complex64::from_polar(1.0, r * r) * sum
}

/// `∫_a^b e^{iσ²}` with `0 ≤ a ≤ b ≤` cutoff by phase-resolving Gauss–Legendre panels.
fn fresnel_segment(a: f64, b: f64) -> Complex64 {
    if a == b {
        return c(0.0, 0.0);
    }
    let f = |s: f64| Complex64::from_polar(1.0, s * s);
    let edges = phase_panels(a, b, 1.0, 0.25, &|s: f64| 2.0 * s.abs());
    panel_sum(&f, &edges).1
}

pub fn special_constants() -> SpecialConstants {
    static CONSTS: OnceLock<SpecialConstants> = OnceLock::new();
    *CONSTS.get_or_init(|| {
        let c_plus = fresnel_segment(0.0, SERIES_CUTOFF) + fresnel_tail_series(SERIES_CUTOFF);
        SpecialConstants { c0: 2.0 * c_plus, c_plus, c_minus: c_plus.conj() }
    })
}

/// `G₁(x) = ∫_x^∞ e^{iσ²} dσ`.
pub fn fresnel_g1(x: f64) -> Complex64 {
    if x < 0.0 {
        return c0_exact() - fresnel_g1(-x);
    }
    if x >= SERIES_CUTOFF {
        return fresnel_tail_series(x);
    }
    c_plus_exact() - fresnel_segment(0.0, x)
}

fn gamma_half_int(twice: usize) -> f64 {
    // Γ(twice/2) for odd `twice`
    let mut g = PI.sqrt();
    let mut a = 0.5;
    while 2.0 * a < twice as f64 {
        g *= a;
        a += 1.0;
    }
    g
}

/// Endpoint series of `g(x) = ∫₀^∞ e^{i(τ⁴+2xτ²)} dτ` at τ = 0:
/// `Σ_n (iⁿ/n!)·½Γ(2n+½)·(−2ix)^{−(2n+½)}`, principal branch.
fn g_endpoint_series(x: f64) -> Complex64 {
    let base = c(0.0, -2.0 * x);
    let mut sum = c(0.0, 0.0);
    let mut prev = f64::INFINITY;
    let mut fact = 1.0;
    for n in 0..200 {
        if n > 0 {
            fact *= n as f64;
        }
        let mag = 0.5 * gamma_half_int(4 * n + 1) / fact * (2.0 * x.abs()).powf(-(2.0 * n as f64 + 0.5));
        if mag >= prev || mag < 1e-20 {
            break;
        }
        prev = mag;
        sum += c(0.0, 1.0).powi(n as i32) / fact * 0.5 * gamma_half_int(4 * n + 1)
            * base.powf(-(2.0 * n as f64 + 0.5));
    }
    sum
}

/// Stationary-point series of `g` at τ = √y for `x = −y < 0`:
/// `e^{−iy²}/(2√y) Σ_k C(−½, 2k) Γ(k+½) e^{iπ(k+½)/2} y^{−2k}`.
fn g_stationary_series(y: f64) -> Complex64 {
    let mut sum = c(0.0, 0.0);
    let mut binom = 1.0; // C(−½, m)
    let mut prev = f64::INFINITY;
    for k in 0..200 {
        let m = 2 * k;
        if k > 0 {
            // advance C(−½, m−2) → C(−½, m)
            for j in (m - 2)..m {
                binom *= (-0.5 - j as f64) / (j + 1) as f64;
            }
        }
        let mag = binom.abs() * gamma_half_int(2 * k + 1) * y.powi(-(2 * k as i32));
        if mag >= prev || mag < 1e-20 {
            break;
        }
        prev = mag;
        sum += binom * gamma_half_int(2 * k + 1) * Complex64::from_polar(1.0, PI * (k as f64 + 0.5) / 2.0)
            * y.powi(-(2 * k as i32));
    }
    Complex64::from_polar(1.0, -y * y) * sum / (2.0 * y.sqrt())
}

/// `g(x)` by quadrature on `[0, R]` and an integration-by-parts tail beyond `R`.
fn g_quadrature(x: f64) -> Complex64 {
    let r = (x.min(0.0).abs()).sqrt() + 2.5;
    let f = |t: f64| Complex64::from_polar(1.0, t * t * (t * t + 2.0 * x));
    let speed = |t: f64| (4.0 * t * t * t + 4.0 * x * t).abs();
    let edges = phase_panels(0.0, r, 1.0, 0.25, &speed);
    panel_sum(&f, &edges).1 + ibp_tail(&[0.0, 0.0, 2.0 * x, 0.0, 1.0], r, 10)
}

/// `G₂(x) = ∫_x^∞ e^{iσ²}/√(σ−x) dσ = 2e^{ix²} g(x)`.
pub fn fresnel_g2(x: f64) -> Complex64 {
    let g = if x >= SERIES_CUTOFF {
        g_endpoint_series(x)
    } else if x <= -SERIES_CUTOFF {
        g_endpoint_series(x) + g_stationary_series(-x)
    } else {
        g_quadrature(x)
    };
    2.0 * Complex64::from_polar(1.0, x * x) * g
}

/// Lemma-form leading terms of `G₂`. For `x → −∞` the second term is `√π e^{iπ/4}/√|x|`.
pub fn g2_leading(x: f64) -> Complex64 {
    let cp = c_plus_exact();
    let a = x.abs();
    if x > 0.0 {
        cp * Complex64::from_polar(1.0, x * x) * (2.0 / a).sqrt()
    } else {
        cp.conj() * Complex64::from_polar(1.0, x * x) * (2.0 / a).sqrt()
            + PI.sqrt() * Complex64::from_polar(1.0, FRAC_PI_4) / a.sqrt()
    }
}

/// Lemma-form leading terms of `G₁`.
pub fn g1_leading(x: f64) -> Complex64 {
    if x > 0.0 {
        -Complex64::from_polar(1.0, x * x) / c(0.0, 2.0 * x)
    } else {
        c0_exact()
    }
}

/// Quadrature-only `G₂`, used to validate the series switch.
pub fn fresnel_g2_quadrature(x: f64) -> Complex64 {
    2.0 * Complex64::from_polar(1.0, x * x) * g_quadrature(x)
}

/// Quadrature-only `G₁` for `x ≥ 0`.
pub fn fresnel_g1_quadrature(x: f64) -> Complex64 {
    special_constants().c_plus - fresnel_segment(0.0, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_match_closed_forms() {
        let k = special_constants();
        assert!((k.c0 - c0_exact()).norm() < 1e-12);
        assert!((k.c_plus - c_plus_exact()).norm() < 1e-12);
        assert!((k.c_minus - c_plus_exact().conj()).norm() < 1e-12);
    }

    #[test]
    fn g1_values() {
        assert!((fresnel_g1(0.0) - c_plus_exact()).norm() < 1e-14);
        for x in [0.5, 2.0, 10.0] {
            assert!((fresnel_g1(x) + fresnel_g1(-x) - c0_exact()).norm() < 1e-12);
        }
        let g = fresnel_g1(10.0);
        assert!((g + Complex64::from_polar(1.0, 100.0) / c(0.0, 20.0)).norm() <= 1e-2);
    }

    #[test]
    fn g1_series_agrees_with_quadrature_at_switch() {
        for x in [7.5, 8.0, 9.0] {
            let q = fresnel_g1_quadrature(x);
            let s = fresnel_tail_series(x);
            assert!((q - s).norm() < 1e-10, "x={x}: {}", (q - s).norm());
        }
    }

    #[test]
    fn g1_derivative_identity() {
        for x in [-3.0, 0.4, 2.2, 9.5] {
            let mut errs = Vec::new();
            for h in [1e-2, 1e-3] {
                let d = (fresnel_g1(x + h) - fresnel_g1(x - h)) / (2.0 * h);
                errs.push((d + Complex64::from_polar(1.0, x * x)).norm());
            }
            assert!(errs[1] < errs[0] / 50.0, "x={x}: {errs:?}");
        }
    }

    #[test]
    fn g2_series_agrees_with_quadrature_at_switch() {
        for x in [-9.0, -8.0, 8.0, 9.0] {
            let q = fresnel_g2_quadrature(x);
            let s = fresnel_g2(x);
            assert!((q - s).norm() < 1e-8, "x={x}: {}", (q - s).norm());
        }
    }

    #[test]
    fn g2_at_zero_and_continuity() {
        // G₂(0) = 2∫₀^∞ e^{iτ⁴}dτ = 2Γ(5/4)e^{iπ/8}
        let gamma_5_4 = 0.906_402_477_055_477_f64;
        let expect = Complex64::from_polar(2.0 * gamma_5_4, PI / 8.0);
        assert!((fresnel_g2(0.0) - expect).norm() < 1e-9);
        assert!((fresnel_g2(0.0) - fresnel_g2(1e-4)).norm() <= 1e-2);
    }
}
