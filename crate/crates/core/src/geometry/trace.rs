use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectral::FreqBox;

/// A traced piece of a level set. Vertices are in φ-coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub vertices: Vec<(f64, f64)>,
    pub closed: bool,
}

impl Polyline {
    /// The same curve in Φ-coordinates, `(ξ, η) ↦ (ξ + η, η)`.
    pub fn to_big_phi(&self) -> Polyline {
        Polyline {
            vertices: self.vertices.iter().map(|&(x, y)| (x + y, y)).collect(),
            closed: self.closed,
        }
    }

    pub fn segments(&self) -> impl Iterator<Item = ((f64, f64), (f64, f64))> + '_ {
        let n = self.vertices.len();
        let extra = usize::from(self.closed && n > 2);
        (0..n.saturating_sub(1) + extra).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }
}

pub const TRACE_TOLERANCE: f64 = 1e-10;

/// Edge identifier: `(i, j, horizontal)` is the edge leaving node `(i, j)` in +ξ (true) or +η.
type EdgeId = (usize, usize, bool);

/// Node values of `field` on a `(res + 1)²` lattice over `bx`, row-major in η.
pub(crate) struct Lattice {
    pub res: usize,
    pub bx: FreqBox,
    pub values: Vec<f64>,
}

impl Lattice {
    pub fn sample(bx: FreqBox, res: usize, field: &(dyn Fn((f64, f64)) -> f64 + Sync)) -> Self {
        let values = (0..=res)
            .into_par_iter()
            .flat_map_iter(|j| {
                let eta = Self::coord(bx.eta.lo, bx.eta.hi, res, j);
                (0..=res).map(move |i| (Self::coord(bx.xi.lo, bx.xi.hi, res, i), eta))
            })
            .map(field)
            .collect();
        Self { res, bx, values }
    }

    fn coord(lo: f64, hi: f64, res: usize, i: usize) -> f64 {
        if i == res {
            hi
        } else {
            lo + (hi - lo) * i as f64 / res as f64
        }
    }

    pub fn node(&self, i: usize, j: usize) -> (f64, f64) {
        (
            Self::coord(self.bx.xi.lo, self.bx.xi.hi, self.res, i),
            Self::coord(self.bx.eta.lo, self.bx.eta.hi, self.res, j),
        )
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * (self.res + 1) + i]
    }

    fn positive(&self, i: usize, j: usize) -> bool {
        // zeros count as positive so every crossing is a strict sign change
        self.value(i, j) >= 0.0
    }
}

/// Root of `field` on the segment `p → q` where the endpoint signs differ, polished by the
/// Illinois variant of regula falsi.
pub fn polish_on_segment(
    field: &dyn Fn((f64, f64)) -> f64,
    p: (f64, f64),
    q: (f64, f64),
    fp: f64,
    fq: f64,
) -> (f64, f64) {
    let at = |s: f64| (p.0 + s * (q.0 - p.0), p.1 + s * (q.1 - p.1));
    if fp == 0.0 {
        return p;
    }
    if fq == 0.0 {
        return q;
    }
    let (mut a, mut b, mut fa, mut fb) = (0.0, 1.0, fp, fq);
    let mut side = 0i8;
    let mut s = 0.5;
    for _ in 0..200 {
        s = (a * fb - b * fa) / (fb - fa);
        if !(s > a && s < b) {
            s = 0.5 * (a + b);
        }
        let fs = field(at(s));
        if fs.abs() <= 0.01 * TRACE_TOLERANCE || (b - a) < 1e-16 {
            break;
        }
        if (fs > 0.0) == (fb > 0.0) {
            b = s;
            fb = fs;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        } else {
            a = s;
            fa = fs;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        }
    }
    at(s)
}

/// Zero set of `field` on `bx` by marching squares on a `res × res` cell grid.
pub fn trace_zero_set(
    bx: FreqBox,
    res: usize,
    field: &(dyn Fn((f64, f64)) -> f64 + Sync),
) -> Result<Vec<Polyline>> {
    let lat = Lattice::sample(bx, res, field);
    if lat.values.iter().all(|&v| v == 0.0) {
        return Err(Error::DegenerateGeometry("field vanishes identically on the box".into()));
    }
    Ok(trace_lattice(&lat, field))
}

pub(crate) fn trace_lattice(lat: &Lattice, field: &(dyn Fn((f64, f64)) -> f64 + Sync)) -> Vec<Polyline> {
    let res = lat.res;
    // crossing points keyed by edge
    let edge_point = |e: EdgeId| -> Option<(f64, f64)> {
        let (i, j, h) = e;
        let (i2, j2) = if h { (i + 1, j) } else { (i, j + 1) };
        if lat.positive(i, j) == lat.positive(i2, j2) {
            return None;
        }
        Some(polish_on_segment(
            field,
            lat.node(i, j),
            lat.node(i2, j2),
            lat.value(i, j),
            lat.value(i2, j2),
        ))
    };
    // per cell segments as pairs of edges, rows computed in parallel and merged in order
    let segments: Vec<(EdgeId, EdgeId)> = (0..res)
        .into_par_iter()
        .flat_map_iter(|j| {
            let mut row = Vec::new();
            for i in 0..res {
                let bottom: EdgeId = (i, j, true);
                let top: EdgeId = (i, j + 1, true);
                let left: EdgeId = (i, j, false);
                let right: EdgeId = (i + 1, j, false);
                let s = [
                    lat.positive(i, j),
                    lat.positive(i + 1, j),
                    lat.positive(i + 1, j + 1),
                    lat.positive(i, j + 1),
                ];
                let crossed: Vec<EdgeId> = [(bottom, 0, 1), (right, 1, 2), (top, 2, 3), (left, 3, 0)]
                    .iter()
                    .filter(|(_, a, b)| s[*a] != s[*b])
                    .map(|(e, _, _)| *e)
                    .collect();
                match crossed.len() {
                    2 => row.push((crossed[0], crossed[1])),
                    4 => {
                        let (cx, cy) = {
                            let p = lat.node(i, j);
                            let q = lat.node(i + 1, j + 1);
                            (0.5 * (p.0 + q.0), 0.5 * (p.1 + q.1))
                        };
                        let center_pos = field((cx, cy)) >= 0.0;
                        // separate the corners that share the center's sign
                        if center_pos == s[0] {
                            row.push((bottom, right));
                            row.push((top, left));
                        } else {
                            row.push((bottom, left));
                            row.push((right, top));
                        }
                    }
                    _ => {}
                }
            }
            row
        })
        .collect();

    let mut points: HashMap<EdgeId, (f64, f64)> = HashMap::new();
    let mut adjacency: HashMap<EdgeId, Vec<usize>> = HashMap::new();
    for (k, (a, b)) in segments.iter().enumerate() {
        for e in [a, b] {
            adjacency.entry(*e).or_default().push(k);
            points.entry(*e).or_insert_with(|| edge_point(*e).expect("crossing edge"));
        }
    }

    let mut used = vec![false; segments.len()];
    let mut lines = Vec::new();
    let other = |k: usize, e: EdgeId| if segments[k].0 == e { segments[k].1 } else { segments[k].0 };
    let walk = |start_seg: usize, from: EdgeId, used: &mut Vec<bool>| -> (Vec<EdgeId>, bool) {
        let mut chain = vec![from];
        let mut seg = start_seg;
        let mut edge = from;
        loop {
            used[seg] = true;
            edge = other(seg, edge);
            if edge == from {
                return (chain, true);
            }
            chain.push(edge);
            match adjacency[&edge].iter().find(|&&s| !used[s]) {
                Some(&s) => seg = s,
                None => return (chain, false),
            }
        }
    };
    // open chains first, starting from edges with a single incident segment, in segment order
    for k in 0..segments.len() {
        if used[k] {
            continue;
        }
        for e in [segments[k].0, segments[k].1] {
            if !used[k] && adjacency[&e].len() == 1 {
                let (chain, closed) = walk(k, e, &mut used);
                lines.push((chain, closed));
            }
        }
    }
    for k in 0..segments.len() {
        if !used[k] {
            let (chain, closed) = walk(k, segments[k].0, &mut used);
            lines.push((chain, closed));
        }
    }
    lines
        .into_iter()
        .map(|(chain, closed)| Polyline {
            vertices: chain.iter().map(|e| points[e]).collect(),
            closed,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_is_one_closed_loop_on_tolerance() {
        let f = |p: (f64, f64)| p.0 * p.0 + p.1 * p.1 - 1.0;
        let lines = trace_zero_set(FreqBox::square(1.7), 64, &f).unwrap();
        assert_eq!(lines.len(), 1);
        assert!(lines[0].closed);
        for v in &lines[0].vertices {
            assert!(f(*v).abs() <= TRACE_TOLERANCE);
        }
    }

    #[test]
    fn refinement_moves_vertices_less_than_a_cell() {
        let f = |p: (f64, f64)| p.0 * p.1 - 0.5;
        let bx = FreqBox::square(2.0);
        let coarse = trace_zero_set(bx, 64, &f).unwrap();
        let fine = trace_zero_set(bx, 128, &f).unwrap();
        let diag = 4.0 / 64.0 * 2f64.sqrt();
        for l in &coarse {
            for v in &l.vertices {
                let d = fine
                    .iter()
                    .flat_map(|m| m.vertices.iter())
                    .map(|w| (w.0 - v.0).hypot(w.1 - v.1))
                    .fold(f64::MAX, f64::min);
                assert!(d <= diag);
            }
        }
    }

    #[test]
    fn identically_zero_is_degenerate() {
        let f = |_: (f64, f64)| 0.0;
        assert!(matches!(
            trace_zero_set(FreqBox::square(1.0), 64, &f),
            Err(Error::DegenerateGeometry(_))
        ));
    }
}
