use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

pub const GL_ORDER: usize = 16;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre() -> &'static ([f64; GL_ORDER], [f64; GL_ORDER]) {
    static RULE: OnceLock<([f64; GL_ORDER], [f64; GL_ORDER])> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut x = [0.0; GL_ORDER];
        let mut w = [0.0; GL_ORDER];
        for i in 0..n {
            let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, z);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
                let dz = p1 / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            x[i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
        (x, w)
    })
}

/// One Gauss–Legendre panel of `f` on `[a, b]`.
pub fn gl_panel(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64) -> Complex64 {
    let (x, w) = gauss_legendre();
    let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..GL_ORDER {
        acc += f(m + h * x[i]) * w[i];
    }
    acc * h
}

/// Panel edges on `[a, b]` such that the phase changes by at most `max_phase` per panel and no
/// panel is wider than `max_width`. `speed` bounds `|d phase / dx|` near a point.
pub fn phase_panels(a: f64, b: f64, max_phase: f64, max_width: f64, speed: &dyn Fn(f64) -> f64) -> Vec<f64> {
    let mut edges = vec![a];
    let mut x = a;
    while x < b {
        let mut w = max_width.min(b - x);
        for _ in 0..60 {
            let m = (0..=4).map(|k| speed(x + w * k as f64 / 4.0)).fold(0.0, f64::max);
            if m * w <= max_phase {
                break;
            }
            w = 0.9 * max_phase / m;
        }
        x = if b - x - w < 1e-12 * (b - a) { b } else { x + w };
        edges.push(x);
    }
    edges
}

/// Sum of panels, and the same sum with every panel halved.
pub fn panel_sum(f: &dyn Fn(f64) -> Complex64, edges: &[f64]) -> (Complex64, Complex64) {
    let mut coarse = Complex64::new(0.0, 0.0);
    let mut fine = Complex64::new(0.0, 0.0);
    for e in edges.windows(2) {
        let (a, b) = (e[0], e[1]);
        let m = 0.5 * (a + b);
        coarse += gl_panel(f, a, b);
        fine += gl_panel(f, a, m) + gl_panel(f, m, b);
    }
    (coarse, fine)
}

/// Truncated Taylor series `Σ c_j h^j` about a fixed point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet(pub Vec<Complex64>);

impl Jet {
    pub fn constant(v: Complex64, len: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); len];
        c[0] = v;
        Jet(c)
    }

    /// Jet of a real polynomial `Σ p_k x^k` about `x0`.
    pub fn polynomial(p: &[f64], x0: f64, len: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); len];
        for (j, cj) in c.iter_mut().enumerate() {
            // j-th Taylor coefficient = p^{(j)}(x0)/j!
            let mut acc = 0.0;
            for (k, &pk) in p.iter().enumerate().skip(j) {
                let binom: f64 = (0..j).map(|i| (k - i) as f64 / (i + 1) as f64).product();
                acc += pk * binom * x0.powi((k - j) as i32);
            }
            *cj = Complex64::new(acc, 0.0);
        }
        Jet(c)
    }

    pub fn value(&self) -> Complex64 {
        self.0[0]
    }

    pub fn derivative(&self) -> Jet {
        Jet(self.0.iter().enumerate().skip(1).map(|(j, c)| c * j as f64).collect())
    }

    pub fn scale(&self, s: Complex64) -> Jet {
        Jet(self.0.iter().map(|c| c * s).collect())
    }

    /// `self / other`, truncated to the shorter length.
    pub fn div(&self, other: &Jet) -> Jet {
        let n = self.0.len().min(other.0.len());
        let mut q = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            let mut acc = self.0[j];
            for k in 0..j {
                acc -= q[k] * other.0[j - k];
            }
            q[j] = acc / other.0[0];
        }
        Jet(q)
    }
}

/// `∫_R^∞ f e^{iP}` for `f = 1` by repeated integration by parts at `R`:
/// `−e^{iP(R)} Σ_k f_k(R)/(iP′(R))`, `f_{k+1} = −(f_k/(iP′))′`. `p` holds the polynomial
/// coefficients of `P`; `P′` must not vanish on `[R, ∞)`.
pub fn ibp_tail(p: &[f64], r: f64, terms: usize) -> Complex64 {
    let len = terms + 1;
    let dp: Vec<f64> = p.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
    let i_dp = Jet::polynomial(&dp, r, len).scale(Complex64::new(0.0, 1.0));
    let mut f = Jet::constant(Complex64::new(1.0, 0.0), len);
    let mut sum = Complex64::new(0.0, 0.0);
    for _ in 0..terms {
        let ratio = f.div(&i_dp);
        sum += ratio.value();
        f = ratio.derivative().scale(Complex64::new(-1.0, 0.0));
        if f.0.is_empty() {
            break;
        }
    }
    let phase: f64 = p.iter().enumerate().map(|(k, c)| c * r.powi(k as i32)).sum();
    -Complex64::from_polar(1.0, phase) * sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_integrates_polynomials_exactly() {
        let f = |x: f64| Complex64::new(x.powi(31) + 3.0 * x.powi(30), 0.0);
        let got = gl_panel(&f, -1.0, 1.0);
        assert!((got.re - 6.0 / 31.0).abs() < 1e-13);
    }

    #[test]
    fn jet_division_and_derivative() {
        // 1/(1 - x) about 0 is Σ x^j
        let one = Jet::constant(Complex64::new(1.0, 0.0), 6);
        let den = Jet::polynomial(&[1.0, -1.0], 0.0, 6);
        let q = one.div(&den);
        assert!(q.0.iter().all(|c| (c.re - 1.0).abs() < 1e-15));
        let p = Jet::polynomial(&[0.0, 0.0, 0.0, 1.0], 2.0, 4);
        assert_eq!(p.0[0].re, 8.0);
        assert_eq!(p.derivative().0[0].re, 12.0);
    }

    #[test]
    fn ibp_tail_matches_fresnel_asymptotics() {
        // ∫_R^∞ e^{iσ²} = −e^{iR²}(1/(2iR) + 1/((2i)²R³) + 3/((2i)³R⁵) + …)
        let r = 6.0;
        let got = ibp_tail(&[0.0, 0.0, 1.0], r, 8);
        let mut series = Complex64::new(0.0, 0.0);
        let mut dfact = 1.0;
        for k in 0..8 {
            if k > 0 {
                dfact *= (2 * k - 1) as f64;
            }
            series += dfact / (Complex64::new(0.0, 2.0).powi(k as i32 + 1) * r.powi(2 * k as i32 + 1));
        }
        let expect = -Complex64::from_polar(1.0, r * r) * series;
        assert!((got - expect).norm() < 1e-14);
    }
}
