use num_complex::Complex64;

use super::grid::Grid;
use super::state::{inverse_transform, transform, Band, SampledState, Spectrum};
use crate::error::{Error, Result};
use crate::smooth;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// Gaussian packet; `width` is the spatial standard width.
    Gaussian,
    /// Spectrum equal to a constant on the inner 80% of `[ξc − width, ξc + width]`.
    FlatSpectrum,
    /// Spectrum a C∞ bump of half-width `width` around `ξc`.
    BandBump,
}

/// Unit-norm witness data together with its spectrum and declared band.
#[derive(Debug, Clone)]
pub struct Witness {
    pub state: SampledState,
    pub spectrum: Spectrum,
}

/// Gaussian spectra are declared to vanish beyond this many inverse widths from the center.
pub const GAUSSIAN_BAND: f64 = 7.5;

pub fn make_witness(
    kind: WitnessKind,
    center_x: f64,
    center_freq: f64,
    width: f64,
    grid: &Grid,
) -> Result<Witness> {
    let grid = *grid;
    match kind {
        WitnessKind::Gaussian => {
            if width < 2.0 * grid.spacing() {
                return Err(Error::Resolution {
                    what: "gaussian width".into(),
                    value: width,
                    limit: 2.0 * grid.spacing(),
                });
            }
            let band = Band::around(center_freq, GAUSSIAN_BAND / width);
            check_nyquist(&grid, band)?;
            let state = SampledState::from_fn(grid, |x| {
                let u = (x - center_x) / width;
                Complex64::from_polar((-0.5 * u * u).exp(), center_freq * x)
            })?;
            let state = state.scaled(Complex64::new(1.0 / state.l2(), 0.0));
            let spectrum = transform(&state);
            let spectrum = Spectrum::with_band(grid, spectrum.coefficients().to_vec(), band)?;
            Ok(Witness { state, spectrum })
        }
        WitnessKind::FlatSpectrum | WitnessKind::BandBump => {
            if width < 2.0 * grid.frequency_step() {
                return Err(Error::Resolution {
                    what: "spectral width".into(),
                    value: width,
                    limit: 2.0 * grid.frequency_step(),
                });
            }
            let band = Band::around(center_freq, width);
            check_nyquist(&grid, band)?;
            let profile = move |u: f64| match kind {
                WitnessKind::FlatSpectrum => smooth::plateau(u, 0.8),
                _ => smooth::bump(u),
            };
            let raw = Spectrum::from_fn(grid, |xi| {
                Complex64::from_polar(profile((xi - center_freq) / width), -center_x * xi)
            })?;
            let spectrum = raw.scaled(Complex64::new(1.0 / raw.l2(), 0.0));
            let spectrum = Spectrum::with_band(grid, spectrum.coefficients().to_vec(), band)?;
            let state = inverse_transform(&spectrum, 1)?;
            Ok(Witness { state, spectrum })
        }
    }
}

fn check_nyquist(grid: &Grid, band: Band) -> Result<()> {
    if band.radius() >= grid.max_frequency() {
        return Err(Error::Resolution {
            what: "witness band edge".into(),
            value: band.radius(),
            limit: grid.max_frequency(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{norm, NormSpec};

    #[test]
    fn gaussian_is_normalized() {
        let g = Grid::new(1024, 64.0).unwrap();
        let w = make_witness(WitnessKind::Gaussian, 0.0, 0.0, 1.0, &g).unwrap();
        assert!((w.state.l2() - 1.0).abs() < 1e-10);
        assert!((w.spectrum.support_radius() - 7.5).abs() < 1e-12);
    }

    #[test]
    fn flat_spectrum_is_flat_inside() {
        let g = Grid::new(1024, 200.0).unwrap();
        let (xc, eps) = (1.0, 0.5);
        let w = make_witness(WitnessKind::FlatSpectrum, 0.0, xc, eps, &g).unwrap();
        let inside: Vec<f64> = g
            .frequencies()
            .zip(w.spectrum.coefficients())
            .filter(|(xi, _)| (xi - xc).abs() <= 0.8 * eps)
            .map(|(_, c)| c.norm())
            .collect();
        let (lo, hi) = inside.iter().fold((f64::MAX, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
        assert!(hi / lo < 1.05);
        assert!((w.state.l2() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn weighted_norm_grows_linearly_in_width() {
        let g = Grid::new(4096, 400.0).unwrap();
        let ws = [1.0, 2.0, 4.0, 8.0];
        let ratios: Vec<f64> = ws
            .iter()
            .map(|&w| {
                let st = make_witness(WitnessKind::Gaussian, 0.0, 0.0, w, &g).unwrap().state;
                norm(&st, NormSpec::WeightedL2(1.0)).value / st.l2()
            })
            .collect();
        let slope = (ratios[3] / ratios[2]).ln() / 2f64.ln();
        assert!((slope - 1.0).abs() < 0.1, "slope {slope}");
    }

    #[test]
    fn too_narrow_is_rejected() {
        let g = Grid::new(64, 8.0).unwrap();
        assert!(matches!(
            make_witness(WitnessKind::Gaussian, 0.0, 0.0, 0.1, &g),
            Err(Error::Resolution { .. })
        ));
    }
}
