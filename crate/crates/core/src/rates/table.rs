use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::GammaClass;

/// `t^exponent · (log t)^log_power`, optionally "for every δ > 0".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayLaw {
    pub exponent: f64,
    pub log_power: u32,
    pub delta_slack: bool,
}

impl DecayLaw {
    pub const BOUNDED: DecayLaw = DecayLaw { exponent: 0.0, log_power: 0, delta_slack: false };

    pub fn power(exponent: f64) -> Self {
        Self { exponent, log_power: 0, delta_slack: false }
    }

    pub fn log() -> Self {
        Self { exponent: 0.0, log_power: 1, delta_slack: false }
    }

    pub fn with_delta(self) -> Self {
        Self { delta_slack: true, ..self }
    }

    /// Local log-log slope of the law at `t`.
    pub fn effective_exponent(&self, t: f64) -> f64 {
        self.exponent + self.log_power as f64 / t.ln()
    }
}

impl fmt::Display for DecayLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t^{}", self.exponent)?;
        if self.log_power > 0 {
            write!(f, " log^{} t", self.log_power)?;
        }
        if self.delta_slack {
            f.write_str(" (+δ)")?;
        }
        Ok(())
    }
}

/// Which published rate family to read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regime {
    /// L² data, rates by geometry of Γ.
    Thm31,
    /// L² data under (H): generic rate.
    Thm32,
    /// Weighted data, Γ a definite point.
    Prop41,
    /// Weighted data, Γ a non-characteristic curve.
    Thm42,
    /// Weighted data, Δ = ∅.
    Thm43,
    /// Weighted data, transversal space-time resonant point.
    Thm44,
    /// Lower bounds at a transversal space-time resonant point.
    Lower252,
}

impl Regime {
    pub const ALL: [Regime; 7] = [
        Regime::Thm31,
        Regime::Thm32,
        Regime::Prop41,
        Regime::Thm42,
        Regime::Thm43,
        Regime::Thm44,
        Regime::Lower252,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Regime::Thm31 => "thm31",
            Regime::Thm32 => "thm32",
            Regime::Prop41 => "prop41",
            Regime::Thm42 => "thm42",
            Regime::Thm43 => "thm43",
            Regime::Thm44 => "thm44",
            Regime::Lower252 => "lower_252",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.tag() == tag)
    }
}

/// Flag attached to every prop41 verdict in the `s > 1/2`, `q < ∞` row.
pub const PROP41_NOTE: &str =
    "encoded as t^{+1/(2q)}; the printed exponent has an ambiguous sign";

fn strip(regime: Regime, what: &str) -> Error {
    Error::Domain(format!("{}: (q, s) outside the validity strip {what}", regime.tag()))
}

fn require_class(regime: Regime, class: GammaClass, allowed: &[GammaClass]) -> Result<()> {
    if allowed.contains(&class) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{} does not apply to class {class}", regime.tag())))
    }
}

/// Tabulated rate `α(t)` for `‖u(t)‖_{L^q}` with data in `L^{2,s}`.
pub fn expected_rate(class: GammaClass, q: f64, s: f64, regime: Regime) -> Result<DecayLaw> {
    if !(q >= 2.0) || q.is_nan() {
        return Err(Error::Domain(format!("q ∈ [2, inf] required, got {q}")));
    }
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!("s ≥ 0 required, got {s}")));
    }
    let inv_q = if q.is_infinite() { 0.0 } else { 1.0 / q };
    let finite = q.is_finite();
    match regime {
        Regime::Thm31 => {
            if s != 0.0 {
                return Err(strip(regime, "s = 0 (L² data)"));
            }
            Ok(match class {
                GammaClass::Empty => DecayLaw::BOUNDED,
                GammaClass::PointOrder2Definite => DecayLaw::power(0.5 + 0.5 * inv_q),
                // the curve through a transversal point is characteristic only along ξ+η
                GammaClass::CurveNoncharacteristic | GammaClass::TransversalPointIntersection => {
                    if finite {
                        DecayLaw::power(inv_q)
                    } else {
                        DecayLaw::log()
                    }
                }
                GammaClass::CurveNonvanishingCurvature => DecayLaw::power(0.25 + 0.5 * inv_q),
                GammaClass::CurveGeneral => DecayLaw::power(0.5),
            })
        }
        Regime::Thm32 => {
            if s != 0.0 {
                return Err(strip(regime, "s = 0 (L² data)"));
            }
            Ok(DecayLaw::power(0.5 + 0.5 * inv_q))
        }
        Regime::Prop41 => {
            require_class(regime, class, &[GammaClass::PointOrder2Definite])?;
            if s < 0.5 {
                Ok(DecayLaw::power(0.5 + 0.5 * inv_q - s))
            } else if s > 0.5 {
                Ok(if finite { DecayLaw::power(0.5 * inv_q) } else { DecayLaw::log() })
            } else {
                Err(strip(regime, "s ∈ [0, 1/2) ∪ (1/2, inf); s = 1/2 is ambiguous"))
            }
        }
        Regime::Thm42 => {
            require_class(
                regime,
                class,
                &[GammaClass::CurveNoncharacteristic, GammaClass::TransversalPointIntersection],
            )?;
            if !finite {
                return Ok(DecayLaw::log());
            }
            if s < 0.25 {
                Ok(DecayLaw::power((1.0 - 4.0 * s) * inv_q))
            } else if s > 0.25 {
                Ok(DecayLaw::log())
            } else {
                Err(strip(regime, "s ∈ [0, 1/4) ∪ (1/4, inf); s = 1/4 is ambiguous"))
            }
        }
        Regime::Thm43 => {
            let lo = inv_q;
            let hi = 1.0 - inv_q;
            let law = if s < lo {
                DecayLaw::power(0.5 * inv_q + 0.5 - 1.5 * s)
            } else if s > lo && s < hi {
                DecayLaw::power(0.5 - s)
            } else if s > hi {
                DecayLaw::power(inv_q - 0.5)
            } else {
                return Err(strip(regime, "s ∉ {1/q, 1 − 1/q}; the boundaries are ambiguous"));
            };
            Ok(law.with_delta())
        }
        Regime::Thm44 => {
            require_class(regime, class, &[GammaClass::TransversalPointIntersection])?;
            // both rows agree at s = 1/4, so the boundary is not ambiguous
            let law = if s <= 0.25 {
                DecayLaw::power(inv_q - s * (0.25 + 3.5 * inv_q))
            } else if s <= 1.0 {
                DecayLaw::power(-s * (0.25 - 0.5 * inv_q))
            } else {
                return Err(strip(regime, "s ∈ [0, 1]"));
            };
            Ok(law.with_delta())
        }
        Regime::Lower252 => {
            require_class(regime, class, &[GammaClass::TransversalPointIntersection])?;
            if q == 2.0 {
                Ok(DecayLaw::log())
            } else {
                Ok(DecayLaw::power(0.5 * inv_q - 0.25))
            }
        }
    }
}
