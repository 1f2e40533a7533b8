use super::phase::{eval_phase, space_field, DispersionTriple, Phase, PhaseJet};
use super::trace::{Lattice, TRACE_TOLERANCE};
use super::ResonanceGeometry;
use crate::spectral::FreqBox;

/// Root tolerance for refined resonant points.
pub const ROOT_TOLERANCE: f64 = 1e-10;
const MAX_NEWTON: usize = 50;

/// A point of Γ ∩ Δ in Φ-coordinates with its transversality data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonantPoint {
    pub xi0: f64,
    pub eta0: f64,
    pub phi_xi: f64,
    pub phi_etaeta: f64,
    pub transversal: bool,
    /// False when Newton did not reach the root tolerance; the point is then only a candidate.
    pub refined: bool,
}

impl ResonantPoint {
    /// The same point in φ-coordinates.
    pub fn phi_coords(&self) -> (f64, f64) {
        (self.xi0 - self.eta0, self.eta0)
    }
}

/// A zero of φ at a nondegenerate critical point with definite Hessian (φ-coordinates).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsolatedZero {
    pub point: (f64, f64),
    pub hessian_eigenvalues: (f64, f64),
}

fn sym_eigen(a: f64, b: f64, d: f64) -> (f64, f64) {
    let m = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    (m - r, m + r)
}

fn solve2(j: [[f64; 2]; 2], r: [f64; 2]) -> Option<[f64; 2]> {
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let scale = j.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max);
    if det.abs() <= 1e-12 * scale * scale || scale == 0.0 {
        return None;
    }
    Some([(j[1][1] * r[0] - j[0][1] * r[1]) / det, (j[0][0] * r[1] - j[1][0] * r[0]) / det])
}

/// Damped least-squares step for a (near-)singular Jacobian.
fn lm_step(j: [[f64; 2]; 2], r: [f64; 2]) -> [f64; 2] {
    let a = j[0][0] * j[0][0] + j[1][0] * j[1][0];
    let b = j[0][0] * j[0][1] + j[1][0] * j[1][1];
    let d = j[0][1] * j[0][1] + j[1][1] * j[1][1];
    let g = [j[0][0] * r[0] + j[1][0] * r[1], j[0][1] * r[0] + j[1][1] * r[1]];
    let lambda = 1e-10 * (a + d).max(1e-300);
    let (a, d) = (a + lambda, d + lambda);
    let det = a * d - b * b;
    [(d * g[0] - b * g[1]) / det, (a * g[1] - b * g[0]) / det]
}

/// Newton (with least-squares fallback) on a 2×2 system; returns the final point and residual.
fn newton2(
    mut p: (f64, f64),
    f: impl Fn((f64, f64)) -> ([f64; 2], [[f64; 2]; 2]),
) -> ((f64, f64), f64) {
    let mut best = (p, f64::INFINITY);
    for _ in 0..MAX_NEWTON {
        let (r, j) = f(p);
        let res = r[0].abs().max(r[1].abs());
        if res < best.1 {
            best = (p, res);
        }
        if res <= 1e-3 * ROOT_TOLERANCE {
            break;
        }
        let step = solve2(j, r).unwrap_or_else(|| lm_step(j, r));
        if !(step[0].is_finite() && step[1].is_finite()) {
            break;
        }
        p = (p.0 - step[0], p.1 - step[1]);
        if step[0].abs().max(step[1].abs()) < 1e-16 * (1.0 + p.0.abs() + p.1.abs()) {
            let (r, _) = f(p);
            let res = r[0].abs().max(r[1].abs());
            if res < best.1 {
                best = (p, res);
            }
            break;
        }
    }
    best
}

/// Local derivative scale used to judge "nonzero" transversality data.
fn derivative_scale(triple: &DispersionTriple, xi: f64, eta: f64) -> f64 {
    1.0 + triple.a.d2(xi).abs() + triple.b.d2(xi - eta).abs() + triple.c.d2(eta).abs()
}

fn resonant_point(triple: &DispersionTriple, p: (f64, f64), refined: bool) -> ResonantPoint {
    let (xi0, eta0) = p;
    let phi_xi = eval_phase(triple, Phase::BigPhi, p, (1, 0, 0));
    let phi_etaeta = eval_phase(triple, Phase::BigPhi, p, (0, 2, 0));
    let tol = 1e-6 * derivative_scale(triple, xi0, eta0);
    ResonantPoint {
        xi0,
        eta0,
        phi_xi,
        phi_etaeta,
        transversal: phi_xi.abs() > tol && phi_etaeta.abs() > tol,
        refined,
    }
}

/// Refines a Φ-coordinate seed to a root of `(Φ, Φ_η)`.
pub fn refine_point(triple: &DispersionTriple, seed: (f64, f64)) -> ResonantPoint {
    let e = |p, d| eval_phase(triple, Phase::BigPhi, p, d);
    let (p, res) = newton2(seed, |p| {
        (
            [e(p, (0, 0, 0)), e(p, (0, 1, 0))],
            [[e(p, (1, 0, 0)), e(p, (0, 1, 0))], [e(p, (1, 1, 0)), e(p, (0, 2, 0))]],
        )
    });
    resonant_point(triple, p, res <= ROOT_TOLERANCE)
}

/// Seeds from sign changes of the Δ field along Γ polylines, plus isolated zeros, refined by
/// Newton in Φ-coordinates. Unrefined candidates are kept with `refined = false`.
pub fn find_spacetime_points(geom: &ResonanceGeometry, triple: &DispersionTriple) -> Vec<ResonantPoint> {
    let d = |p: (f64, f64)| space_field(triple, p);
    let mut seeds = Vec::new();
    for line in &geom.gamma {
        for (p, q) in line.segments() {
            let (dp, dq) = (d(p), d(q));
            if dp == 0.0 {
                seeds.push(p);
            } else if (dp > 0.0) != (dq > 0.0) && dq != 0.0 {
                let s = dp / (dp - dq);
                seeds.push((p.0 + s * (q.0 - p.0), p.1 + s * (q.1 - p.1)));
            }
        }
        if let (Some(&last), false) = (line.vertices.last(), line.closed) {
            if d(last) == 0.0 {
                seeds.push(last);
            }
        }
    }
    seeds.extend(geom.isolated.iter().map(|z| z.point));

    let cell = (geom.bx.xi.width().max(geom.bx.eta.width())) / geom.resolution as f64;
    let mut out: Vec<ResonantPoint> = Vec::new();
    for (x, y) in seeds {
        let rp = refine_point(triple, (x + y, y));
        // a refined point must stay near its seed; otherwise Newton wandered to another root
        let moved = (rp.xi0 - (x + y)).hypot(rp.eta0 - y);
        let rp = if moved > 4.0 * cell {
            resonant_point(triple, (x + y, y), false)
        } else {
            rp
        };
        let dup = out.iter_mut().find(|q| (q.xi0 - rp.xi0).hypot(q.eta0 - rp.eta0) < 1e-6);
        match dup {
            Some(q) if !q.refined && rp.refined => *q = rp,
            Some(_) => {}
            None => out.push(rp),
        }
    }
    out.sort_by(|a, b| a.xi0.total_cmp(&b.xi0).then(a.eta0.total_cmp(&b.eta0)));
    out
}

/// Zeros of φ at critical points with definite Hessian: local minima of |φ| on the lattice,
/// refined by Newton on ∇φ.
pub(crate) fn isolated_zeros(triple: &DispersionTriple, bx: FreqBox, res: usize) -> Vec<IsolatedZero> {
    let phi = |p: (f64, f64)| eval_phase(triple, Phase::Phi, p, (0, 0, 0)).abs();
    let lat = Lattice::sample(bx, res, &phi);
    let mut out: Vec<IsolatedZero> = Vec::new();
    for j in 0..=res {
        for i in 0..=res {
            let v = lat.value(i, j);
            let mut is_min = true;
            for (di, dj) in [(-1i64, -1i64), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)] {
                let (ni, nj) = (i as i64 + di, j as i64 + dj);
                if ni < 0 || nj < 0 || ni > res as i64 || nj > res as i64 {
                    continue;
                }
                if lat.value(ni as usize, nj as usize) < v {
                    is_min = false;
                    break;
                }
            }
            if !is_min {
                continue;
            }
            let (p, res_grad) = newton2(lat.node(i, j), |p| {
                let jet = PhaseJet::of(triple, Phase::Phi, p);
                ([jet.d1, jet.d2], [[jet.d11, jet.d12], [jet.d12, jet.d22]])
            });
            let margin = 1e-9;
            let inside = p.0 >= bx.xi.lo - margin
                && p.0 <= bx.xi.hi + margin
                && p.1 >= bx.eta.lo - margin
                && p.1 <= bx.eta.hi + margin;
            if !inside || res_grad > ROOT_TOLERANCE {
                continue;
            }
            let jet = PhaseJet::of(triple, Phase::Phi, p);
            if jet.v.abs() > TRACE_TOLERANCE {
                continue;
            }
            let (l1, l2) = sym_eigen(jet.d11, jet.d12, jet.d22);
            let definite = l1 * l2 > 0.0 && l1.abs() > 1e-6 && l2.abs() > 1e-6;
            if definite && !out.iter().any(|z| (z.point.0 - p.0).hypot(z.point.1 - p.1) < 1e-8) {
                out.push(IsolatedZero { point: p, hessian_eigenvalues: (l1, l2) });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::{trace_resonance_sets, DispersionTriple};
    use super::*;

    #[test]
    fn shifted_triple_has_two_transversal_points() {
        let t = DispersionTriple::schrodinger_shifted(1.0);
        let g = trace_resonance_sets(&t, FreqBox::square(2.0), 64).unwrap();
        let pts = find_spacetime_points(&g, &t);
        assert_eq!(pts.len(), 2);
        let r2 = 2f64.sqrt();
        for p in &pts {
            assert!(p.refined && p.transversal);
            let s = p.xi0.signum();
            assert!((p.xi0 - s * r2).abs() < 1e-10 && (p.eta0 - s * r2 / 2.0).abs() < 1e-10);
            assert!((p.phi_xi + 2.0 * p.eta0).abs() < 1e-12);
            assert_eq!(p.phi_etaeta, 4.0);
        }
    }

    #[test]
    fn schrodinger_origin_is_not_transversal() {
        let t = DispersionTriple::schrodinger();
        let g = trace_resonance_sets(&t, FreqBox::square(2.0), 64).unwrap();
        let pts = find_spacetime_points(&g, &t);
        assert_eq!(pts.len(), 1);
        assert!(pts[0].xi0.abs() < 1e-5 && pts[0].eta0.abs() < 1e-5);
        assert!(!pts[0].transversal);
    }

    #[test]
    fn definite_triple_has_isolated_zero() {
        let t = DispersionTriple::definite();
        let g = trace_resonance_sets(&t, FreqBox::square(1.0), 65).unwrap();
        assert!(g.gamma.is_empty());
        assert_eq!(g.isolated.len(), 1);
        let (l1, l2) = g.isolated[0].hessian_eigenvalues;
        assert!((l1 - 1.0).abs() < 1e-12 && (l2 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn gap_triple_has_no_points() {
        let t = DispersionTriple::gap();
        let g = trace_resonance_sets(&t, FreqBox::square(1.0), 64).unwrap();
        assert!(find_spacetime_points(&g, &t).is_empty());
    }
}
