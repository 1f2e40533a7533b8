use std::fmt;

use super::phase::{DispersionTriple, Phase, PhaseJet};
use super::points::ROOT_TOLERANCE;
use super::ResonanceGeometry;
use crate::error::{Error, Result};
use crate::spectral::SupportRegion;

/// Rate-table category of Γ inside a symbol support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GammaClass {
    Empty,
    PointOrder2Definite,
    CurveNoncharacteristic,
    CurveNonvanishingCurvature,
    CurveGeneral,
    TransversalPointIntersection,
}

impl GammaClass {
    pub fn tag(&self) -> &'static str {
        match self {
            GammaClass::Empty => "empty",
            GammaClass::PointOrder2Definite => "point_order2_definite",
            GammaClass::CurveNoncharacteristic => "curve_noncharacteristic",
            GammaClass::CurveNonvanishingCurvature => "curve_nonvanishing_curvature",
            GammaClass::CurveGeneral => "curve_general",
            GammaClass::TransversalPointIntersection => "transversal_point_intersection",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        [
            GammaClass::Empty,
            GammaClass::PointOrder2Definite,
            GammaClass::CurveNoncharacteristic,
            GammaClass::CurveNonvanishingCurvature,
            GammaClass::CurveGeneral,
            GammaClass::TransversalPointIntersection,
        ]
        .into_iter()
        .find(|c| c.tag() == tag)
    }
}

impl fmt::Display for GammaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Direction held constant along Γ at a characteristic point: the tangent keeps `ξ`, `η`
/// or `ξ + η` fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharDirection {
    Xi,
    Eta,
    XiPlusEta,
}

impl CharDirection {
    pub fn name(&self) -> &'static str {
        match self {
            CharDirection::Xi => "xi",
            CharDirection::Eta => "eta",
            CharDirection::XiPlusEta => "xi+eta",
        }
    }

    /// Quantity whose vanishing on Γ marks this direction.
    fn indicator(&self, j: &PhaseJet) -> f64 {
        match self {
            // tangent (φ_η, −φ_ξ) ∥ (0, 1)
            CharDirection::Xi => j.d2,
            // tangent ∥ (1, 0)
            CharDirection::Eta => j.d1,
            // tangent ∥ (1, −1)
            CharDirection::XiPlusEta => j.d1 - j.d2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicPoint {
    pub point: (f64, f64),
    pub direction: CharDirection,
}

const DIRECTIONS: [CharDirection; 3] = [CharDirection::Xi, CharDirection::Eta, CharDirection::XiPlusEta];

/// Points of Γ whose tangent is one of the three distinguished directions (φ-coordinates).
pub fn characteristic_points(geom: &ResonanceGeometry, triple: &DispersionTriple) -> Vec<CharacteristicPoint> {
    let jet = |p| PhaseJet::of(triple, Phase::Phi, p);
    let mut out: Vec<CharacteristicPoint> = Vec::new();
    let mut push = |point: (f64, f64), direction| {
        if !out.iter().any(|c| c.direction == direction && (c.point.0 - point.0).hypot(c.point.1 - point.1) < 1e-6) {
            out.push(CharacteristicPoint { point, direction });
        }
    };
    for line in &geom.gamma {
        for dir in DIRECTIONS {
            for &v in &line.vertices {
                let j = jet(v);
                if dir.indicator(&j).abs() <= 1e-6 * j.grad_norm() {
                    push(v, dir);
                }
            }
            for (p, q) in line.segments() {
                let (gp, gq) = (dir.indicator(&jet(p)), dir.indicator(&jet(q)));
                if gp != 0.0 && gq != 0.0 && (gp > 0.0) != (gq > 0.0) {
                    let s = gp / (gp - gq);
                    let seed = (p.0 + s * (q.0 - p.0), p.1 + s * (q.1 - p.1));
                    push(refine_characteristic(triple, dir, seed), dir);
                }
            }
        }
    }
    out
}

/// Newton on `(φ, indicator)` from a seed; falls back to the seed on failure.
fn refine_characteristic(triple: &DispersionTriple, dir: CharDirection, seed: (f64, f64)) -> (f64, f64) {
    let mut p = seed;
    for _ in 0..50 {
        let j = PhaseJet::of(triple, Phase::Phi, p);
        let g = dir.indicator(&j);
        let (gx, gy) = match dir {
            CharDirection::Xi => (j.d12, j.d22),
            CharDirection::Eta => (j.d11, j.d12),
            CharDirection::XiPlusEta => (j.d11 - j.d12, j.d12 - j.d22),
        };
        if j.v.abs() <= ROOT_TOLERANCE && g.abs() <= ROOT_TOLERANCE {
            return p;
        }
        let det = j.d1 * gy - j.d2 * gx;
        if det == 0.0 || !det.is_finite() {
            return seed;
        }
        p = (p.0 - (gy * j.v - j.d2 * g) / det, p.1 - (j.d1 * g - gx * j.v) / det);
    }
    let j = PhaseJet::of(triple, Phase::Phi, p);
    if j.v.abs() <= 1e3 * ROOT_TOLERANCE && (p.0 - seed.0).hypot(p.1 - seed.1) < 1.0 {
        p
    } else {
        seed
    }
}

pub const CURVATURE_FLOOR: f64 = 1e-3;

/// Decision tree applied to the geometry inside `support` (φ-coordinates).
pub fn classify(geom: &ResonanceGeometry, triple: &DispersionTriple, support: SupportRegion) -> Result<GammaClass> {
    let inside = |p: (f64, f64)| support.contains(p.0, p.1);
    let curve: Vec<(f64, f64)> = geom.gamma_vertices().filter(|&p| inside(p)).collect();
    let isolated: Vec<_> = geom.isolated.iter().filter(|z| inside(z.point)).collect();

    if curve.is_empty() && isolated.is_empty() {
        return Ok(GammaClass::Empty);
    }
    if !curve.is_empty() && !isolated.is_empty() {
        return Err(Error::MixedGeometry(format!(
            "{} curve vertices and {} isolated zeros of φ",
            curve.len(),
            isolated.len()
        )));
    }
    if curve.is_empty() {
        if isolated.len() > 1 {
            return Err(Error::MixedGeometry(format!("{} isolated zeros of φ", isolated.len())));
        }
        return Ok(GammaClass::PointOrder2Definite);
    }

    let transversal: Vec<_> = geom
        .points
        .iter()
        .filter(|p| p.refined && p.transversal && inside(p.phi_coords()))
        .collect();
    if transversal.len() > 1 {
        return Err(Error::MixedGeometry(format!(
            "{} transversal space-time resonant points",
            transversal.len()
        )));
    }
    if transversal.len() == 1 {
        return Ok(GammaClass::TransversalPointIntersection);
    }

    let characteristic = geom
        .characteristic_points
        .iter()
        .filter(|c| c.direction != CharDirection::XiPlusEta && inside(c.point))
        .count();
    if characteristic == 0 {
        return Ok(GammaClass::CurveNoncharacteristic);
    }
    let curved = curve
        .iter()
        .all(|&p| PhaseJet::of(triple, Phase::Phi, p).level_curvature() >= CURVATURE_FLOOR);
    if curved {
        Ok(GammaClass::CurveNonvanishingCurvature)
    } else {
        Ok(GammaClass::CurveGeneral)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{analyze, trace_resonance_sets};
    use super::*;
    use crate::spectral::FreqBox;

    #[test]
    fn gap_is_empty() {
        let g = analyze(
            &DispersionTriple::gap(),
            SupportRegion::Disk { center: (0.0, 0.0), radius: 1.0 },
            64,
        )
        .unwrap();
        assert_eq!(g.classification, Some(GammaClass::Empty));
    }

    #[test]
    fn definite_is_point_order2() {
        let g = analyze(
            &DispersionTriple::definite(),
            SupportRegion::Disk { center: (0.0, 0.0), radius: 1.0 },
            64,
        )
        .unwrap();
        assert_eq!(g.classification, Some(GammaClass::PointOrder2Definite));
    }

    #[test]
    fn tilted_is_noncharacteristic_with_exempt_points_outside() {
        let t = DispersionTriple::tilted();
        let support = SupportRegion::Disk { center: (1.0, -1.0 / 3.0), radius: 0.3 };
        let g = analyze(&t, support, 128).unwrap();
        assert_eq!(g.classification, Some(GammaClass::CurveNoncharacteristic));
        let wide = trace_resonance_sets(&t, FreqBox::square(1.6), 128).unwrap();
        let exempt: Vec<_> = characteristic_points(&wide, &t);
        let exempt: Vec<_> = exempt
            .iter()
            .filter(|c| c.direction == CharDirection::XiPlusEta)
            .collect();
        for target in [(0.0, 0.0), (-1.0, -1.0)] {
            assert!(exempt
                .iter()
                .any(|c| (c.point.0 - target.0).hypot(c.point.1 - target.1) < 1e-8));
            assert!(!support.contains(target.0, target.1));
        }
    }

    #[test]
    fn shifted_family_is_transversal() {
        for kappa in [0.3, 1.0, 1.7] {
            let t = DispersionTriple::schrodinger_shifted(kappa);
            let x = (kappa / 2.0).sqrt();
            let support = SupportRegion::Disk { center: (x, x), radius: 0.25 };
            let g = analyze(&t, support, 96).unwrap();
            assert_eq!(g.classification, Some(GammaClass::TransversalPointIntersection), "κ={kappa}");
        }
    }

    #[test]
    fn both_points_inside_is_mixed() {
        let t = DispersionTriple::schrodinger_shifted(1.0);
        let r = analyze(&t, SupportRegion::Rectangle(FreqBox::square(2.0)), 64);
        assert!(matches!(r, Err(Error::MixedGeometry(_))));
    }

    #[test]
    fn tags_round_trip() {
        for c in [GammaClass::Empty, GammaClass::CurveGeneral, GammaClass::TransversalPointIntersection] {
            assert_eq!(GammaClass::from_tag(c.tag()), Some(c));
        }
    }
}
