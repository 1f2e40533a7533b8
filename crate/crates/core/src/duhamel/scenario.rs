use crate::error::{Error, Result};
use crate::geometry::{analyze, eval_phase, space_field, DispersionTriple, GammaClass, Phase, ResonanceGeometry, ResonantPoint};
use crate::spectral::{make_witness, Band, BilinearSymbol, Grid, Spectrum, Witness, WitnessKind, GAUSSIAN_BAND};

/// Description of one input field, realized on the scenario grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DataSpec {
    pub kind: WitnessKind,
    pub center_x: f64,
    pub center_freq: f64,
    pub width: f64,
}

impl DataSpec {
    pub fn gaussian(center_x: f64, center_freq: f64, width: f64) -> Self {
        Self { kind: WitnessKind::Gaussian, center_x, center_freq, width }
    }

    pub fn band(&self) -> Band {
        match self.kind {
            WitnessKind::Gaussian => Band::around(self.center_freq, GAUSSIAN_BAND / self.width),
            _ => Band::around(self.center_freq, self.width),
        }
    }

    /// RMS width of `|f̂|²` (closed form for Gaussians, close estimates otherwise).
    pub fn rms_spectral_width(&self) -> f64 {
        match self.kind {
            WitnessKind::Gaussian => 1.0 / (2f64.sqrt() * self.width),
            WitnessKind::FlatSpectrum => 0.5 * self.width,
            WitnessKind::BandBump => 0.3 * self.width,
        }
    }

    pub fn realize(&self, grid: &Grid) -> Result<Witness> {
        make_witness(self.kind, self.center_x, self.center_freq, self.width, grid)
    }
}

/// One experimental unit: dispersion triple, symbol, data, grid and the traced geometry.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub label: String,
    pub triple: DispersionTriple,
    pub symbol: BilinearSymbol,
    pub f: Witness,
    pub g: Witness,
    pub grid: Grid,
    pub geometry: ResonanceGeometry,
    /// Set when the geometry inside the support could not be given a single class.
    pub classification_error: Option<String>,
}

/// Largest group speed the fields of a scenario can reach.
fn max_speed(triple: &DispersionTriple, symbol: &BilinearSymbol, f: Band, g: Band) -> f64 {
    let bx = symbol.support_box();
    let fb = f.intersect(&bx.xi).unwrap_or(f);
    let gb = g.intersect(&bx.eta).unwrap_or(g);
    let out = fb.sum(&gb);
    // only the parts of the data inside the symbol support interact
    triple
        .a
        .max_speed(out.lo, out.hi)
        .max(triple.b.max_speed(fb.lo, fb.hi))
        .max(triple.c.max_speed(gb.lo, gb.hi))
}

/// Period needed to keep every field away from the periodic boundary up to time `t`.
pub fn required_length(
    triple: &DispersionTriple,
    symbol: &BilinearSymbol,
    f: &DataSpec,
    g: &DataSpec,
    t: f64,
) -> f64 {
    let v = max_speed(triple, symbol, f.band(), g.band());
    let w = f.rms_spectral_width().min(g.rms_spectral_width());
    2.0 * v * t + 10.0 / w + 2.0 * f.center_x.abs().max(g.center_x.abs())
}

impl Scenario {
    /// Builds a scenario, choosing the grid from the wrap-around bound at `t_max` and the bands.
    pub fn build(
        label: impl Into<String>,
        triple: DispersionTriple,
        symbol: BilinearSymbol,
        f: DataSpec,
        g: DataSpec,
        t_max: f64,
        resolution: usize,
    ) -> Result<Self> {
        let length = required_length(&triple, &symbol, &f, &g, t_max);
        let bx = symbol.support_box();
        let fb = f.band();
        let gb = g.band();
        let out = match (fb.intersect(&bx.xi), gb.intersect(&bx.eta)) {
            (Some(a), Some(b)) => a.sum(&b),
            _ => Band::new(0.0, 0.0),
        };
        let reach = fb.radius().max(gb.radius()).max(out.radius());
        // Nyquist at least 1.25× the widest band edge, and at least 2 so the sup norm is sampled finely
        let dx_max = std::f64::consts::PI / (1.25 * reach).max(2.0);
        let mut n = 64usize;
        while length / (n as f64) > dx_max {
            n *= 2;
        }
        let grid = Grid::new(n, length)?;
        Self::on_grid(label, triple, symbol, f.realize(&grid)?, g.realize(&grid)?, grid, resolution)
    }

    pub fn on_grid(
        label: impl Into<String>,
        triple: DispersionTriple,
        symbol: BilinearSymbol,
        f: Witness,
        g: Witness,
        grid: Grid,
        resolution: usize,
    ) -> Result<Self> {
        if *f.state.grid() != grid || *g.state.grid() != grid {
            return Err(Error::Config("scenario data must live on the scenario grid".into()));
        }
        let bx = symbol.support_box();
        let (geometry, classification_error) = match analyze(&triple, symbol.support(), resolution) {
            Ok(g) => (g, None),
            Err(Error::MixedGeometry(msg)) => {
                let mut g = crate::geometry::trace_resonance_sets(&triple, bx, resolution)?;
                g.points = crate::geometry::find_spacetime_points(&g, &triple);
                g.characteristic_points = crate::geometry::characteristic_points(&g, &triple);
                (g, Some(msg))
            }
            Err(e) => return Err(e),
        };
        Ok(Self { label: label.into(), triple, symbol, f, g, grid, geometry, classification_error })
    }

    pub fn f_hat(&self) -> &Spectrum {
        &self.f.spectrum
    }

    pub fn g_hat(&self) -> &Spectrum {
        &self.g.spectrum
    }

    pub fn classification(&self) -> Result<GammaClass> {
        if let Some(msg) = &self.classification_error {
            return Err(Error::MixedGeometry(msg.clone()));
        }
        self.geometry
            .classification
            .ok_or_else(|| Error::DegenerateGeometry("geometry not classified".into()))
    }

    /// Largest group speed over the bands actually in play.
    pub fn max_speed(&self) -> f64 {
        max_speed(&self.triple, &self.symbol, self.f.spectrum.band(), self.g.spectrum.band())
    }

    /// Period required to evolve up to `t` without wrap-around.
    pub fn required_length(&self, t: f64) -> f64 {
        let w = rms_width(&self.f.spectrum).min(rms_width(&self.g.spectrum));
        let cx = self.f.state.centroid().abs().max(self.g.state.centroid().abs());
        2.0 * self.max_speed() * t + 10.0 / w + 2.0 * cx
    }

    pub fn check_wrap(&self, t: f64) -> Result<()> {
        let required = self.required_length(t);
        // a relative slack absorbs the difference between estimated and measured widths
        if required > 1.05 * self.grid.length() {
            return Err(Error::WrapAround { t, length: self.grid.length(), required });
        }
        Ok(())
    }

    /// `(min |φ|, max |φ|)` over lattice points of the symbol support where `m ≠ 0`.
    pub fn phase_range_on_support(&self) -> (f64, f64) {
        self.field_range_on_support(|p| eval_phase(&self.triple, Phase::Phi, p, (0, 0, 0)))
    }

    /// `(min, max)` of `|(∂ξ − ∂η)φ|` over the symbol support.
    pub fn space_field_range_on_support(&self) -> (f64, f64) {
        self.field_range_on_support(|p| space_field(&self.triple, p))
    }

    fn field_range_on_support(&self, field: impl Fn((f64, f64)) -> f64) -> (f64, f64) {
        let bx = self.symbol.support_box();
        let n = 200;
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for j in 0..=n {
            for i in 0..=n {
                let p = (
                    bx.xi.lo + bx.xi.width() * i as f64 / n as f64,
                    bx.eta.lo + bx.eta.width() * j as f64 / n as f64,
                );
                if self.symbol.eval(p.0, p.1).norm() == 0.0 {
                    continue;
                }
                let v = field(p).abs();
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        if lo.is_infinite() {
            (0.0, 0.0)
        } else {
            (lo, hi)
        }
    }

    /// The unique refined transversal resonant point inside the support.
    pub fn resonant_point(&self) -> Result<ResonantPoint> {
        let support = self.symbol.support();
        let pts: Vec<_> = self
            .geometry
            .points
            .iter()
            .filter(|p| {
                let (x, y) = p.phi_coords();
                p.refined && p.transversal && support.contains(x, y)
            })
            .copied()
            .collect();
        match pts.len() {
            1 => Ok(pts[0]),
            0 => Err(Error::Hypothesis("no transversal space-time resonant point in the support".into())),
            k => Err(Error::Hypothesis(format!("{k} transversal resonant points in the support"))),
        }
    }
}

fn rms_width(s: &Spectrum) -> f64 {
    let mut m = 0.0;
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for (xi, c) in s.grid().frequencies().zip(s.coefficients()) {
        let w = c.norm_sqr();
        m += w;
        m1 += w * xi;
        m2 += w * xi * xi;
    }
    if m == 0.0 {
        return f64::INFINITY;
    }
    let mean = m1 / m;
    (m2 / m - mean * mean).max(0.0).sqrt()
}
