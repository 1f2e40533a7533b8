use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::grid::Grid;
use crate::dispersion::DispersionRelation;
use crate::error::{Error, Result};

/// Closed frequency interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo: lo.min(hi), hi: lo.max(hi) }
    }

    pub fn around(center: f64, radius: f64) -> Self {
        Self::new(center - radius, center + radius)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn radius(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Minkowski sum, the band of a product.
    pub fn sum(&self, other: &Band) -> Band {
        Band::new(self.lo + other.lo, self.hi + other.hi)
    }

    pub fn intersect(&self, other: &Band) -> Option<Band> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Band { lo, hi })
    }
}

/// Samples of a complex field at the grid points.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledState {
    grid: Grid,
    values: Vec<Complex64>,
}

impl SampledState {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::Config(format!(
                "state has {} samples, grid has {}",
                values.len(),
                grid.n_points()
            )));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Config("state contains non-finite samples".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self { grid, values: vec![Complex64::new(0.0, 0.0); grid.n_points()] }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.positions().map(f).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// `‖·‖₂` with the grid measure.
    pub fn l2(&self) -> f64 {
        (self.grid.spacing() * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|v| v * factor).collect() }
    }

    /// Spatial centroid of `|u|²`.
    pub fn centroid(&self) -> f64 {
        let mut m = 0.0;
        let mut mx = 0.0;
        for (x, v) in self.grid.positions().zip(&self.values) {
            m += v.norm_sqr();
            mx += x * v.norm_sqr();
        }
        if m == 0.0 {
            0.0
        } else {
            mx / m
        }
    }
}

/// Centered spectrum: coefficient `k` sits at frequency `(k − n/2)·Δξ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: Grid,
    coefficients: Vec<Complex64>,
    band: Band,
}

/// Relative level below which a coefficient counts as outside the band.
pub const BAND_THRESHOLD: f64 = 1e-12;

impl Spectrum {
    /// Builds a spectrum and measures its band from the coefficients.
    pub fn new(grid: Grid, coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() != grid.n_points() {
            return Err(Error::Config(format!(
                "spectrum has {} coefficients, grid has {}",
                coefficients.len(),
                grid.n_points()
            )));
        }
        let band = measured_band(&grid, &coefficients);
        Ok(Self { grid, coefficients, band })
    }

    /// Builds a spectrum with an explicitly declared band.
    pub fn with_band(grid: Grid, coefficients: Vec<Complex64>, band: Band) -> Result<Self> {
        let mut s = Self::new(grid, coefficients)?;
        s.band = band;
        Ok(s)
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            coefficients: vec![Complex64::new(0.0, 0.0); grid.n_points()],
            band: Band::new(0.0, 0.0),
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let c = grid.frequencies().map(f).collect();
        Self::new(grid, c)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn band(&self) -> Band {
        self.band
    }

    pub fn support_radius(&self) -> f64 {
        self.band.radius()
    }

    /// `‖·‖₂` with the frequency-grid measure.
    pub fn l2(&self) -> f64 {
        (self.grid.frequency_step() * self.coefficients.iter().map(|v| v.norm_sqr()).sum::<f64>())
            .sqrt()
    }

    /// Value at an arbitrary frequency by linear interpolation between bins.
    pub fn value_at(&self, xi: f64) -> Complex64 {
        let dk = self.grid.frequency_step();
        let pos = xi / dk + (self.grid.n_points() / 2) as f64;
        if pos < 0.0 || pos > (self.grid.n_points() - 1) as f64 {
            return Complex64::new(0.0, 0.0);
        }
        let k = pos.floor() as usize;
        let w = pos - k as f64;
        if k + 1 >= self.grid.n_points() {
            return self.coefficients[k];
        }
        self.coefficients[k] * (1.0 - w) + self.coefficients[k + 1] * w
    }

    pub fn peak(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &Spectrum) -> Result<Spectrum> {
        if self.grid != other.grid {
            return Err(Error::Config("spectra live on different grids".into()));
        }
        let c = self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a + b).collect();
        Spectrum::new(self.grid, c)
    }

    pub fn sub(&self, other: &Spectrum) -> Result<Spectrum> {
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Spectrum {
        Spectrum {
            grid: self.grid,
            coefficients: self.coefficients.iter().map(|c| c * factor).collect(),
            band: self.band,
        }
    }

    /// Multiplies every coefficient by `m(ξ_k)`.
    pub fn multiplied(&self, m: impl Fn(f64) -> Complex64) -> Spectrum {
        let coefficients = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(k, c)| c * m(self.grid.frequency(k)))
            .collect();
        Spectrum { grid: self.grid, coefficients, band: self.band }
    }
}

fn measured_band(grid: &Grid, c: &[Complex64]) -> Band {
    let peak = c.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Band::new(0.0, 0.0);
    }
    let cut = BAND_THRESHOLD * peak;
    let first = c.iter().position(|v| v.norm() > cut).unwrap_or(0);
    let last = c.iter().rposition(|v| v.norm() > cut).unwrap_or(0);
    Band::new(grid.frequency(first), grid.frequency(last))
}

fn alternating_sign(m: usize, half: usize) -> f64 {
    if (m + half) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Unitary discrete Fourier transform `f̂(ξ) = (2π)^{-1/2} ∫ e^{-ixξ} f(x) dx`.
pub fn transform(state: &SampledState) -> Spectrum {
    let grid = *state.grid();
    let n = grid.n_points();
    let half = n / 2;
    let mut buf = state.values().to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = grid.spacing() / (2.0 * PI).sqrt();
    // bin m (natural order) holds frequency index m for m < n/2, m − n otherwise
    let mut centered = vec![Complex64::new(0.0, 0.0); n];
    for (m, v) in buf.into_iter().enumerate() {
        let k = (m + half) % n;
        centered[k] = v * scale * alternating_sign(k, half);
    }
    let band = measured_band(&grid, &centered);
    Spectrum { grid, coefficients: centered, band }
}

/// Inverse of [`transform`]. With `padding_factor > 1` the spectrum is zero-padded and the
/// result is sampled `padding_factor`× more densely on the same period.
pub fn inverse_transform(spec: &Spectrum, padding_factor: usize) -> Result<SampledState> {
    if padding_factor == 0 {
        return Err(Error::Config("padding factor must be positive".into()));
    }
    let grid = spec.grid().refined(padding_factor)?;
    let n = grid.n_points();
    let half = n / 2;
    let offset = (n - spec.grid().n_points()) / 2;
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (k0, c) in spec.coefficients().iter().enumerate() {
        let k = k0 + offset;
        let m = (k + n - half) % n;
        buf[m] = c * alternating_sign(k, half);
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let scale = grid.frequency_step() / (2.0 * PI).sqrt();
    for v in buf.iter_mut() {
        *v *= scale;
    }
    SampledState::new(grid, buf)
}

/// `e^{it·dr(D)}`: multiplies each coefficient by `e^{it·dr(ξ_k)}`.
pub fn apply_linear_group(spec: &Spectrum, dr: &DispersionRelation, t: f64) -> Spectrum {
    if t == 0.0 {
        return spec.clone();
    }
    spec.multiplied(|xi| Complex64::from_polar(1.0, t * dr.eval(xi)))
}
