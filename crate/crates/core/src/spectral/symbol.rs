use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::state::Band;
use crate::smooth;

/// Axis-aligned rectangle in the `(ξ, η)` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreqBox {
    pub xi: Band,
    pub eta: Band,
}

impl FreqBox {
    pub fn new(xi: Band, eta: Band) -> Self {
        Self { xi, eta }
    }

    pub fn square(half: f64) -> Self {
        Self::new(Band::new(-half, half), Band::new(-half, half))
    }

    pub fn centered(center: (f64, f64), half: f64) -> Self {
        Self::new(Band::around(center.0, half), Band::around(center.1, half))
    }

    pub fn contains(&self, xi: f64, eta: f64) -> bool {
        self.xi.contains(xi) && self.eta.contains(eta)
    }
}

/// Where a symbol may be nonzero. Disks keep the exact shape for geometry classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SupportRegion {
    Rectangle(FreqBox),
    Disk { center: (f64, f64), radius: f64 },
}

impl SupportRegion {
    pub fn bounding_box(&self) -> FreqBox {
        match *self {
            SupportRegion::Rectangle(b) => b,
            SupportRegion::Disk { center, radius } => FreqBox::centered(center, radius),
        }
    }

    pub fn contains(&self, xi: f64, eta: f64) -> bool {
        match *self {
            SupportRegion::Rectangle(b) => b.contains(xi, eta),
            SupportRegion::Disk { center, radius } => {
                let (dx, dy) = (xi - center.0, eta - center.1);
                dx * dx + dy * dy <= radius * radius
            }
        }
    }
}

type Evaluator = Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync>;

/// Compactly supported symbol `m(ξ, η)`. The output frequency of the pair `(ξ, η)` is `ξ + η`.
#[derive(Clone)]
pub struct BilinearSymbol {
    support: SupportRegion,
    sup_bound: f64,
    note: String,
    evaluator: Evaluator,
}

impl fmt::Debug for BilinearSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BilinearSymbol")
            .field("support", &self.support)
            .field("sup_bound", &self.sup_bound)
            .field("note", &self.note)
            .finish()
    }
}

impl BilinearSymbol {
    pub fn new(
        support: SupportRegion,
        sup_bound: f64,
        note: impl Into<String>,
        evaluator: impl Fn(f64, f64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self { support, sup_bound, note: note.into(), evaluator: Arc::new(evaluator) }
    }

    pub fn constant(value: Complex64, support: FreqBox) -> Self {
        Self::new(SupportRegion::Rectangle(support), value.norm(), "constant", move |_, _| value)
    }

    pub fn zero() -> Self {
        Self::constant(Complex64::new(0.0, 0.0), FreqBox::square(0.0))
    }

    /// Radial C∞ bump equal to 1 on the inner `plateau` fraction of the disk.
    pub fn disk_bump(center: (f64, f64), radius: f64, plateau: f64) -> Self {
        Self::new(SupportRegion::Disk { center, radius }, 1.0, "radial bump", move |xi, eta| {
            let r = ((xi - center.0).powi(2) + (eta - center.1).powi(2)).sqrt() / radius;
            Complex64::new(smooth::plateau(r, plateau), 0.0)
        })
    }

    pub fn support(&self) -> SupportRegion {
        self.support
    }

    pub fn support_box(&self) -> FreqBox {
        self.support.bounding_box()
    }

    pub fn sup_bound(&self) -> f64 {
        self.sup_bound
    }

    pub fn smoothness_note(&self) -> &str {
        &self.note
    }

    /// `m(ξ, η)`, zero outside the support.
    pub fn eval(&self, xi: f64, eta: f64) -> Complex64 {
        if !self.support.contains(xi, eta) {
            return Complex64::new(0.0, 0.0);
        }
        (self.evaluator)(xi, eta)
    }

    /// `μ(ξ, η) = m(ξ − η, η)`, the symbol in output-frequency coordinates.
    pub fn eval_mu(&self, xi: f64, eta: f64) -> Complex64 {
        self.eval(xi - eta, eta)
    }

    /// New symbol `(ξ, η) ↦ g(ξ, η, m(ξ, η))` on the same support.
    pub fn map(
        &self,
        sup_bound: f64,
        note: impl Into<String>,
        g: impl Fn(f64, f64, Complex64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        let inner = self.evaluator.clone();
        let support = self.support;
        Self::new(support, sup_bound, note, move |xi, eta| g(xi, eta, inner(xi, eta)))
    }

    pub fn is_zero(&self) -> bool {
        self.sup_bound == 0.0
    }
}
