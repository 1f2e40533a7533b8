use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::state::Spectrum;
use super::symbol::BilinearSymbol;
use crate::error::{Error, Result};

/// `T_m(f, g)`: output coefficient at `ξ` is `Δξ/√(2π) Σ_η μ(ξ, η) f̂(ξ − η) ĝ(η)`.
///
/// With `m ≡ 1` on a box covering both spectra this is exactly the transform of the pointwise
/// product. Pairs whose output frequency leaves the grid are rejected as aliasing.
pub fn apply_bilinear_multiplier(
    m: &BilinearSymbol,
    f: &Spectrum,
    g: &Spectrum,
) -> Result<Spectrum> {
    let grid = *f.grid();
    if *g.grid() != grid {
        return Err(Error::Config("bilinear inputs live on different grids".into()));
    }
    let zero = || Spectrum::zeros(grid);
    if m.is_zero() {
        return Ok(zero());
    }
    let bx = m.support_box();
    let (Some(xi_band), Some(eta_band)) = (f.band().intersect(&bx.xi), g.band().intersect(&bx.eta))
    else {
        return Ok(zero());
    };
    let (Some(fr), Some(gr)) = (
        grid.bins_in(xi_band.lo, xi_band.hi),
        grid.bins_in(eta_band.lo, eta_band.hi),
    ) else {
        return Ok(zero());
    };
    let n = grid.n_points() as i64;
    let half = n / 2;
    let o_lo = fr.0 as i64 + gr.0 as i64 - half;
    let o_hi = fr.1 as i64 + gr.1 as i64 - half;
    if o_lo < 0 || o_hi > n - 1 {
        return Err(Error::Aliasing(format!(
            "output band [{:.4}, {:.4}] exceeds the grid's frequency range ±{:.4}",
            xi_band.lo + eta_band.lo,
            xi_band.hi + eta_band.hi,
            grid.max_frequency()
        )));
    }
    let fc = f.coefficients();
    let gc = g.coefficients();
    let scale = grid.frequency_step() / (2.0 * PI).sqrt();
    let rows: Vec<Complex64> = (o_lo..=o_hi)
        .into_par_iter()
        .map(|o| {
            let k_lo = (gr.0 as i64).max(o + half - fr.1 as i64);
            let k_hi = (gr.1 as i64).min(o + half - fr.0 as i64);
            let mut acc = Complex64::new(0.0, 0.0);
            for k in k_lo..=k_hi {
                let kf = (o + half - k) as usize;
                let k = k as usize;
                let w = m.eval(grid.frequency(kf), grid.frequency(k));
                if w.re != 0.0 || w.im != 0.0 {
                    acc += w * fc[kf] * gc[k];
                }
            }
            acc * scale
        })
        .collect();
    let mut out = vec![Complex64::new(0.0, 0.0); grid.n_points()];
    out[o_lo as usize..=o_hi as usize].copy_from_slice(&rows);
    Spectrum::new(grid, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{inverse_transform, transform, FreqBox, Grid, SampledState};

    fn packet(grid: Grid, x0: f64, k0: f64, w: f64) -> SampledState {
        SampledState::from_fn(grid, |x| {
            Complex64::from_polar((-(x - x0).powi(2) / (2.0 * w * w)).exp(), k0 * x)
        })
        .unwrap()
    }

    #[test]
    fn unit_symbol_gives_pointwise_product() {
        let grid = Grid::new(512, 60.0).unwrap();
        let f = packet(grid, -2.0, 1.5, 2.0);
        let g = packet(grid, 1.0, -0.7, 1.5);
        let m = BilinearSymbol::constant(Complex64::new(1.0, 0.0), FreqBox::square(20.0));
        let out = inverse_transform(&apply_bilinear_multiplier(&m, &transform(&f), &transform(&g)).unwrap(), 1)
            .unwrap();
        let peak = f.values().iter().zip(g.values()).map(|(a, b)| (a * b).norm()).fold(0.0, f64::max);
        for ((a, b), u) in f.values().iter().zip(g.values()).zip(out.values()) {
            assert!((a * b - u).norm() <= 1e-10 * peak);
        }
    }

    #[test]
    fn zero_symbol_gives_zero() {
        let grid = Grid::new(256, 40.0).unwrap();
        let f = transform(&packet(grid, 0.0, 0.0, 2.0));
        let out = apply_bilinear_multiplier(&BilinearSymbol::zero(), &f, &f).unwrap();
        assert!(out.coefficients().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn aliasing_is_rejected() {
        let grid = Grid::new(64, 20.0).unwrap();
        let nyq = grid.max_frequency();
        let f = transform(&packet(grid, 0.0, 0.8 * nyq, 2.0));
        let m = BilinearSymbol::constant(Complex64::new(1.0, 0.0), FreqBox::square(2.0 * nyq));
        assert!(matches!(apply_bilinear_multiplier(&m, &f, &f), Err(Error::Aliasing(_))));
    }
}
