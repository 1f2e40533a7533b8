use crate::dispersion::DispersionRelation;
use crate::error::{Error, Result};
use crate::spectral::FreqBox;

/// The three dispersion relations of the interaction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionTriple {
    pub a: DispersionRelation,
    pub b: DispersionRelation,
    pub c: DispersionRelation,
}

impl DispersionTriple {
    pub fn new(a: DispersionRelation, b: DispersionRelation, c: DispersionRelation) -> Self {
        Self { a, b, c }
    }

    /// `a = b = c = ζ²`
    pub fn schrodinger() -> Self {
        let s = DispersionRelation::schrodinger();
        Self::new(s, s, s)
    }

    /// `a = c = ζ²`, `b = ζ² + κ`
    pub fn schrodinger_shifted(kappa: f64) -> Self {
        let s = DispersionRelation::schrodinger();
        Self::new(s, s.shifted(kappa), s)
    }

    /// `a = ζ²`, `b = c = ζ² + 5`
    pub fn gap() -> Self {
        let s = DispersionRelation::schrodinger();
        Self::new(s, s.shifted(5.0), s.shifted(5.0))
    }

    /// `a = ζ²/4`, `b = c = ζ²`
    pub fn definite() -> Self {
        let s = DispersionRelation::schrodinger();
        Self::new(DispersionRelation::quadratic(0.25, 0.0), s, s)
    }

    /// `a = ζ² + ζ`, `b = c = ζ²`
    pub fn tilted() -> Self {
        let s = DispersionRelation::schrodinger();
        let a = DispersionRelation::new(&[0.0, 1.0, 1.0]).expect("valid coefficients");
        Self::new(a, s, s)
    }

    /// Smallest of `|a″|, |b″|, |c″|` over the ranges reached from `bx` (φ-coordinates);
    /// hypothesis (H) holds on the box when this is positive.
    pub fn hypothesis_h(&self, bx: &FreqBox) -> f64 {
        let lo_sum = bx.xi.lo + bx.eta.lo;
        let hi_sum = bx.xi.hi + bx.eta.hi;
        let min_abs = |p: &DispersionRelation, lo: f64, hi: f64| {
            let (a, b) = p.derivative_range(lo, hi, 2);
            if a <= 0.0 && b >= 0.0 {
                0.0
            } else {
                a.abs().min(b.abs())
            }
        };
        min_abs(&self.a, lo_sum, hi_sum)
            .min(min_abs(&self.b, bx.xi.lo, bx.xi.hi))
            .min(min_abs(&self.c, bx.eta.lo, bx.eta.hi))
    }

    /// Checks (H) with a declared positive lower bound.
    pub fn require_hypothesis_h(&self, bx: &FreqBox, bound: f64) -> Result<()> {
        let m = self.hypothesis_h(bx);
        if m < bound {
            return Err(Error::Hypothesis(format!(
                "(H): min |a″|,|b″|,|c″| = {m:.3e} below declared {bound:.3e}"
            )));
        }
        Ok(())
    }
}

/// Which phase to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Phase {
    /// `φ(ξ, η) = −a(ξ+η) + b(ξ) + c(η)`
    Phi,
    /// `Φ(ξ, η) = −a(ξ) + b(ξ−η) + c(η) = φ(ξ−η, η)`
    BigPhi,
    /// `ψ(ξ, η, σ) = (1−σ)a(ξ) + σb(ξ−η) + σc(η) + Xξ`
    Psi { sigma: f64, x: f64 },
}

/// Exact partial derivative `∂ξ^i ∂η^j [∂σ^k]` of the chosen phase at `(ξ, η)`.
/// The σ-order `k` is only meaningful for [`Phase::Psi`].
pub fn eval_phase(
    triple: &DispersionTriple,
    which: Phase,
    point: (f64, f64),
    derivative: (usize, usize, usize),
) -> f64 {
    let (xi, eta) = point;
    let (i, j, k) = derivative;
    let DispersionTriple { a, b, c } = triple;
    let big_phi = |i: usize, j: usize| {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let mut v = sign * b.derivative(xi - eta, i + j);
        if j == 0 {
            v -= a.derivative(xi, i);
        }
        if i == 0 {
            v += c.derivative(eta, j);
        }
        v
    };
    match which {
        Phase::Phi => {
            if k > 0 {
                return 0.0;
            }
            let mut v = -a.derivative(xi + eta, i + j);
            if j == 0 {
                v += b.derivative(xi, i);
            }
            if i == 0 {
                v += c.derivative(eta, j);
            }
            v
        }
        Phase::BigPhi => {
            if k > 0 {
                0.0
            } else {
                big_phi(i, j)
            }
        }
        Phase::Psi { sigma, x } => match k {
            0 => {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                let mut v = sigma * sign * b.derivative(xi - eta, i + j);
                if j == 0 {
                    v += (1.0 - sigma) * a.derivative(xi, i);
                    if i == 0 {
                        v += x * xi;
                    } else if i == 1 {
                        v += x;
                    }
                }
                if i == 0 {
                    v += sigma * c.derivative(eta, j);
                }
                v
            }
            1 => big_phi(i, j),
            _ => 0.0,
        },
    }
}

/// `φ` and its exact first and second derivatives at one point.
#[derive(Debug, Clone, Copy)]
pub struct PhaseJet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
    pub d11: f64,
    pub d12: f64,
    pub d22: f64,
}

impl PhaseJet {
    pub fn of(triple: &DispersionTriple, which: Phase, p: (f64, f64)) -> Self {
        let e = |i, j| eval_phase(triple, which, p, (i, j, 0));
        Self { v: e(0, 0), d1: e(1, 0), d2: e(0, 1), d11: e(2, 0), d12: e(1, 1), d22: e(0, 2) }
    }

    pub fn grad_norm(&self) -> f64 {
        self.d1.hypot(self.d2)
    }

    /// Curvature of the level set through the point.
    pub fn level_curvature(&self) -> f64 {
        let g = self.grad_norm();
        if g == 0.0 {
            return f64::INFINITY;
        }
        let num = self.d2 * self.d2 * self.d11 - 2.0 * self.d1 * self.d2 * self.d12
            + self.d1 * self.d1 * self.d22;
        num.abs() / (g * g * g)
    }
}

/// `(∂ξ − ∂η)φ = b′(ξ) − c′(η)`, whose zero set is Δ in φ-coordinates.
pub fn space_field(triple: &DispersionTriple, p: (f64, f64)) -> f64 {
    triple.b.d1(p.0) - triple.c.d1(p.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_points(n: usize) -> Vec<(f64, f64)> {
        let mut s = 0x2545f4914f6cdd1du64;
        let mut next = move || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 * 4.0 - 2.0
        };
        (0..n).map(|_| (next(), next())).collect()
    }

    #[test]
    fn closed_forms() {
        let s = DispersionTriple::schrodinger();
        assert_eq!(eval_phase(&s, Phase::Phi, (1.0, 2.0), (0, 0, 0)), -4.0);
        let sh = DispersionTriple::schrodinger_shifted(1.0);
        for &(xi, eta) in &random_points(20) {
            let v = eval_phase(&sh, Phase::BigPhi, (xi, eta), (0, 0, 0));
            assert!((v - (-2.0 * xi * eta + 2.0 * eta * eta + 1.0)).abs() < 1e-12);
            let d = eval_phase(&sh, Phase::BigPhi, (xi, eta), (0, 1, 0));
            assert!((d - (-2.0 * xi + 4.0 * eta)).abs() < 1e-12);
            let big = eval_phase(&sh, Phase::BigPhi, (xi, eta), (0, 0, 0));
            let small = eval_phase(&sh, Phase::Phi, (xi - eta, eta), (0, 0, 0));
            assert!((big - small).abs() < 1e-12);
            let psi0 = eval_phase(&sh, Phase::Psi { sigma: 0.0, x: 0.7 }, (xi, eta), (0, 0, 0));
            assert!((psi0 - (xi * xi + 0.7 * xi)).abs() < 1e-12);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let t = DispersionTriple::new(
            DispersionRelation::new(&[0.1, 0.3, 1.0, 0.2]).unwrap(),
            DispersionRelation::new(&[0.0, -0.4, 0.8, 0.0, 0.05]).unwrap(),
            DispersionRelation::new(&[1.0, 0.0, 1.3, -0.1]).unwrap(),
        );
        let h = 1e-4;
        let phases = [Phase::Phi, Phase::BigPhi, Phase::Psi { sigma: 0.37, x: -0.6 }];
        for p in random_points(100) {
            for which in phases {
                for (i, j) in [(0, 0), (1, 0), (0, 1)] {
                    let f = |q: (f64, f64)| eval_phase(&t, which, q, (i, j, 0));
                    let fx = (f((p.0 + h, p.1)) - f((p.0 - h, p.1))) / (2.0 * h);
                    let fy = (f((p.0, p.1 + h)) - f((p.0, p.1 - h))) / (2.0 * h);
                    let ex = eval_phase(&t, which, p, (i + 1, j, 0));
                    let ey = eval_phase(&t, which, p, (i, j + 1, 0));
                    assert!((fx - ex).abs() <= 1e-6 * ex.abs().max(1.0), "{which:?} {p:?}");
                    assert!((fy - ey).abs() <= 1e-6 * ey.abs().max(1.0), "{which:?} {p:?}");
                }
            }
            let s = 0.37;
            let f = |sg: f64| eval_phase(&t, Phase::Psi { sigma: sg, x: -0.6 }, p, (0, 0, 0));
            let fs = (f(s + h) - f(s - h)) / (2.0 * h);
            let es = eval_phase(&t, Phase::Psi { sigma: s, x: -0.6 }, p, (0, 0, 1));
            assert!((fs - es).abs() <= 1e-6 * es.abs().max(1.0));
        }
    }

    #[test]
    fn hypothesis_h_detects_linear_relation() {
        let bx = FreqBox::square(1.0);
        assert!((DispersionTriple::gap().hypothesis_h(&bx) - 2.0).abs() < 1e-12);
        let lin = DispersionRelation::new(&[0.0, 1.0]).unwrap();
        let t = DispersionTriple::new(lin, lin, lin);
        assert!(t.require_hypothesis_h(&bx, 0.1).is_err());
    }
}
