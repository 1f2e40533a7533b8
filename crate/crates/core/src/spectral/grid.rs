use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Uniform periodic grid on `[-L/2, L/2)` with `n` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n_points: usize,
    length: f64,
}

impl Grid {
    pub fn new(n_points: usize, length: f64) -> Result<Self> {
        if n_points < 4 || !n_points.is_power_of_two() {
            return Err(Error::Config(format!(
                "grid size {n_points} must be a power of two (≥ 4)"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Config(format!("grid length {length} must be positive")));
        }
        Ok(Self { n_points, length })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n_points as f64
    }

    pub fn frequency_step(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Nyquist frequency `π / spacing`.
    pub fn max_frequency(&self) -> f64 {
        PI / self.spacing()
    }

    pub fn position(&self, j: usize) -> f64 {
        -0.5 * self.length + j as f64 * self.spacing()
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |j| self.position(j))
    }

    /// Frequency of the centered bin `k`, i.e. `(k − n/2)·Δξ`.
    pub fn frequency(&self, k: usize) -> f64 {
        (k as f64 - (self.n_points / 2) as f64) * self.frequency_step()
    }

    pub fn frequencies(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |k| self.frequency(k))
    }

    /// Centered bin range `[first, last]` whose frequencies lie in `[lo, hi]`, clipped to the grid.
    pub fn bins_in(&self, lo: f64, hi: f64) -> Option<(usize, usize)> {
        if hi < lo {
            return None;
        }
        let dk = self.frequency_step();
        let half = (self.n_points / 2) as f64;
        let first = ((lo / dk).ceil() + half).max(0.0);
        let last = ((hi / dk).floor() + half).min(self.n_points as f64 - 1.0);
        if last < first {
            None
        } else {
            Some((first as usize, last as usize))
        }
    }

    /// Same spacing in frequency, `factor`× more points in space.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Grid::new(self.n_points * factor, self.length)
    }
}
