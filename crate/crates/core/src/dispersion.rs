//! Polynomial dispersion relations with exact derivatives.

use crate::error::{Error, Result};

pub const MAX_DEGREE: usize = 4;

/// A real polynomial `c0 + c1 ζ + … + c4 ζ⁴` used as a dispersion relation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionRelation {
    coefficients: [f64; MAX_DEGREE + 1],
}

impl DispersionRelation {
    pub fn new(coefficients: &[f64]) -> Result<Self> {
        if coefficients.len() > MAX_DEGREE + 1 {
            let extra = &coefficients[MAX_DEGREE + 1..];
            if extra.iter().any(|&c| c != 0.0) {
                return Err(Error::Config(format!(
                    "dispersion relation degree exceeds {MAX_DEGREE}"
                )));
            }
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::Config("non-finite dispersion coefficient".into()));
        }
        let mut c = [0.0; MAX_DEGREE + 1];
        for (dst, src) in c.iter_mut().zip(coefficients) {
            *dst = *src;
        }
        Ok(Self { coefficients: c })
    }

    /// `ζ²`
    pub fn schrodinger() -> Self {
        Self { coefficients: [0.0, 0.0, 1.0, 0.0, 0.0] }
    }

    /// `k·ζ² + shift`
    pub fn quadratic(k: f64, shift: f64) -> Self {
        Self { coefficients: [shift, 0.0, k, 0.0, 0.0] }
    }

    pub fn coefficients(&self) -> &[f64; MAX_DEGREE + 1] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    /// Adds a constant to the relation.
    pub fn shifted(&self, kappa: f64) -> Self {
        let mut c = self.coefficients;
        c[0] += kappa;
        Self { coefficients: c }
    }

    /// `order`-th derivative at `z`, exact (Horner on the differentiated coefficients).
    pub fn derivative(&self, z: f64, order: usize) -> f64 {
        if order > MAX_DEGREE {
            return 0.0;
        }
        let mut acc = 0.0;
        for k in (order..=MAX_DEGREE).rev() {
            let falling: f64 = (k + 1 - order..=k).map(|j| j as f64).product();
            acc = acc * z + self.coefficients[k] * falling;
        }
        acc
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.derivative(z, 0)
    }

    pub fn d1(&self, z: f64) -> f64 {
        self.derivative(z, 1)
    }

    pub fn d2(&self, z: f64) -> f64 {
        self.derivative(z, 2)
    }

    /// Range of the derivative of `order` over `[lo, hi]` by dense sampling plus the endpoints.
    pub fn derivative_range(&self, lo: f64, hi: f64, order: usize) -> (f64, f64) {
        let n = 512;
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for i in 0..=n {
            let z = lo + (hi - lo) * i as f64 / n as f64;
            let v = self.derivative(z, order);
            min = min.min(v);
            max = max.max(v);
        }
        (min, max)
    }

    /// `max |d/dζ|` over `[lo, hi]`.
    pub fn max_speed(&self, lo: f64, hi: f64) -> f64 {
        let (a, b) = self.derivative_range(lo, hi, 1);
        a.abs().max(b.abs())
    }
}
