use std::f64::consts::PI;

use num_complex::Complex64;

use super::scenario::Scenario;
use crate::error::{Error, Result};
use crate::geometry::DispersionTriple;
use crate::spectral::{apply_bilinear_multiplier, apply_linear_group, BilinearSymbol, Spectrum};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `∫₀^t e^{isφ} ds = t e^{itφ/2} sinc(tφ/2)`, stable as `φ → 0`.
pub fn time_kernel(phi: f64, t: f64) -> Complex64 {
    Complex64::from_polar(t * sinc(0.5 * t * phi), 0.5 * t * phi)
}

/// Symbol of `T_t`: `−i e^{ita(ξ+η)} m(ξ, η) t e^{itφ/2} sinc(tφ/2)`.
pub fn duhamel_symbol(triple: &DispersionTriple, m: &BilinearSymbol, t: f64) -> BilinearSymbol {
    let tr = *triple;
    m.map(m.sup_bound() * t.abs(), format!("duhamel at t = {t}"), move |xi, eta, v| {
        if v == Complex64::new(0.0, 0.0) {
            return v;
        }
        let phi = tr.b.eval(xi) + tr.c.eval(eta) - tr.a.eval(xi + eta);
        -I * Complex64::from_polar(1.0, t * tr.a.eval(xi + eta)) * v * time_kernel(phi, t)
    })
}

/// `û(t)` through the closed-form time integral; refuses times past the wrap-around budget.
pub fn evolve(sc: &Scenario, t: f64) -> Result<Spectrum> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("time must be finite and non-negative, got {t}")));
    }
    sc.check_wrap(t)?;
    evolve_unchecked(sc, t)
}

pub(crate) fn evolve_unchecked(sc: &Scenario, t: f64) -> Result<Spectrum> {
    if t == 0.0 {
        return Ok(Spectrum::zeros(sc.grid));
    }
    apply_bilinear_multiplier(&duhamel_symbol(&sc.triple, &sc.symbol, t), sc.f_hat(), sc.g_hat())
}

/// Smallest admissible Simpson step count for `[0, t]`.
pub fn min_quadrature_steps(sc: &Scenario, t: f64) -> usize {
    let (_, phi_max) = sc.phase_range_on_support();
    (4.0 * t * phi_max / PI).ceil().max(2.0) as usize
}

/// Same evolution by composite Simpson in `s` with `n_steps` (even) panels.
pub fn evolve_quadrature(sc: &Scenario, t: f64, n_steps: usize) -> Result<Spectrum> {
    sc.check_wrap(t)?;
    let minimum = min_quadrature_steps(sc, t);
    if n_steps < minimum {
        return Err(Error::UnderResolved { what: "Simpson steps".into(), given: n_steps, minimum });
    }
    if n_steps % 2 != 0 {
        return Err(Error::Config(format!("Simpson needs an even step count, got {n_steps}")));
    }
    if t == 0.0 {
        return Ok(Spectrum::zeros(sc.grid));
    }
    let h = t / n_steps as f64;
    // the bilinear step is already parallel over rows, so nodes run in sequence
    let mut acc = vec![Complex64::new(0.0, 0.0); sc.grid.n_points()];
    for k in 0..=n_steps {
        let s = k as f64 * h;
        let w = if k == 0 || k == n_steps {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let f = apply_linear_group(sc.f_hat(), &sc.triple.b, s);
        let g = apply_linear_group(sc.g_hat(), &sc.triple.c, s);
        let v = apply_linear_group(&apply_bilinear_multiplier(&sc.symbol, &f, &g)?, &sc.triple.a, t - s);
        for (a, c) in acc.iter_mut().zip(v.coefficients()) {
            *a += w * c;
        }
    }
    let scale = -I * h / 3.0;
    let coefficients = acc.into_iter().map(|c| c * scale).collect();
    Spectrum::new(sc.grid, coefficients)
}
