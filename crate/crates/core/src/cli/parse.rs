use std::collections::HashMap;
use std::fmt;

use crate::dispersion::DispersionRelation;
use crate::duhamel::DataSpec;
use crate::geometry::DispersionTriple;
use crate::rates::{log_spaced, Regime, ScalingFamily};
use crate::spectral::WitnessKind;

/// A line-numbered problem found while reading a scenario file.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    Schrodinger,
    SchrodingerShifted(f64),
    Gap,
    Definite,
    Tilted,
}

impl Preset {
    pub fn name(&self) -> &'static str {
        match self {
            Preset::Schrodinger => "schrodinger",
            Preset::SchrodingerShifted(_) => "schrodinger_shifted",
            Preset::Gap => "gap",
            Preset::Definite => "definite",
            Preset::Tilted => "tilted",
        }
    }

    pub fn triple(&self) -> DispersionTriple {
        match *self {
            Preset::Schrodinger => DispersionTriple::schrodinger(),
            Preset::SchrodingerShifted(k) => DispersionTriple::schrodinger_shifted(k),
            Preset::Gap => DispersionTriple::gap(),
            Preset::Definite => DispersionTriple::definite(),
            Preset::Tilted => DispersionTriple::tilted(),
        }
    }

    /// Symbol, data and experiment defaults used when a section leaves them out.
    pub fn defaults(&self) -> Defaults {
        let g = DataSpec::gaussian;
        let base = Defaults {
            symbol: SymbolConfig { center: (0.0, 0.0), radius: 1.0, plateau: 0.5 },
            f: g(0.0, 0.0, 3.0),
            g: g(0.0, 0.3, 3.0),
            times: log_spaced(10.0, 200.0, 10),
            q: vec![2.0, f64::INFINITY],
            weights: Vec::new(),
            regime: Regime::Thm31,
            data_weight: 0.0,
        };
        match *self {
            Preset::Schrodinger => Defaults { regime: Regime::Thm32, ..base },
            Preset::Definite => base,
            Preset::Gap => Defaults {
                // wide data that do not disperse over the window
                symbol: SymbolConfig { center: (3.0, -3.0), radius: 0.4, plateau: 0.5 },
                f: g(0.0, 3.0, 60.0),
                g: g(0.0, -3.0, 60.0),
                times: log_spaced(20.0, 500.0, 12),
                ..base
            },
            Preset::Tilted => Defaults {
                symbol: SymbolConfig { center: (1.0, -1.0 / 3.0), radius: 0.3, plateau: 0.5 },
                f: g(0.0, 1.0, 16.0),
                g: g(0.0, -1.0 / 3.0, 16.0),
                times: log_spaced(20.0, 400.0, 10),
                ..base
            },
            Preset::SchrodingerShifted(k) => {
                let c = (k.abs() / 2.0).sqrt();
                Defaults {
                    symbol: SymbolConfig { center: (c, c), radius: 0.6, plateau: 0.5 },
                    f: g(0.0, c, 2.0),
                    g: g(0.0, c, 2.0),
                    times: log_spaced(50.0, 1000.0, 12),
                    q: vec![f64::INFINITY],
                    weights: vec![1.0],
                    regime: Regime::Thm44,
                    data_weight: 1.0,
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Defaults {
    pub symbol: SymbolConfig,
    pub f: DataSpec,
    pub g: DataSpec,
    pub times: Vec<f64>,
    pub q: Vec<f64>,
    pub weights: Vec<f64>,
    pub regime: Regime,
    pub data_weight: f64,
}

/// A C∞ disk bump `disk_bump(center, radius, plateau)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolConfig {
    pub center: (f64, f64),
    pub radius: f64,
    pub plateau: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Experiments {
    pub times: Vec<f64>,
    /// Lebesgue exponents for norms and rate verdicts.
    pub q: Vec<f64>,
    /// Weights `s` of extra `L^{2,s}` norms in the norm trajectories.
    pub weights: Vec<f64>,
    pub regime: Regime,
    /// `s` of the data space the rate refers to.
    pub data_weight: f64,
    /// Exponents for the lower-bound probe at a transversal resonant point.
    pub lower_q: Vec<f64>,
    /// `(p, q, T₁, T₂)` for the integrated bound ratio.
    pub strichartz: Option<(f64, f64, f64, f64)>,
    pub scaling: Vec<ScalingFamily>,
    pub oscillatory: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub label: String,
    pub preset: Option<Preset>,
    pub triple: DispersionTriple,
    pub symbol: SymbolConfig,
    pub f: DataSpec,
    pub g: DataSpec,
    pub t_max: f64,
    /// Lattice resolution for tracing Γ and Δ.
    pub resolution: usize,
    /// Zero-padding factor when norms are sampled.
    pub padding: usize,
    pub experiments: Experiments,
}

/// A parsed file; `None` for a file with no sections.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioFile {
    pub scenario: Option<ScenarioConfig>,
}

const SECTIONS: [&str; 5] = ["dispersion", "symbol", "data", "grid", "experiments"];

fn allowed_keys(section: &str) -> &'static [&'static str] {
    match section {
        "dispersion" => &["preset", "kappa", "a", "b", "c", "label"],
        "symbol" => &["center", "radius", "plateau"],
        "data" => &[
            "f_kind", "f_center_x", "f_freq", "f_width", "g_kind", "g_center_x", "g_freq", "g_width",
        ],
        "grid" => &["t_max", "resolution", "padding"],
        "experiments" => &[
            "times", "t_from", "t_to", "n_times", "q", "weights", "regime", "data_weight", "lower_q",
            "strichartz", "scaling", "oscillatory",
        ],
        _ => &[],
    }
}

#[derive(Debug, Clone)]
struct Entry {
    line: usize,
    value: String,
}

struct Section {
    entries: HashMap<String, Entry>,
}

/// Typed access to one section's entries; every failure becomes a diagnostic.
struct Reader<'a> {
    section: Option<&'a Section>,
    header: usize,
    diags: &'a mut Vec<Diagnostic>,
}

fn parse_number(s: &str) -> Option<f64> {
    match s {
        "inf" | "+inf" | "infinity" => Some(f64::INFINITY),
        _ => s.parse::<f64>().ok().filter(|v| v.is_finite()),
    }
}

fn parse_list(s: &str) -> Option<Vec<f64>> {
    let inner = s.strip_prefix('[')?.strip_suffix(']')?.trim();
    if inner.is_empty() {
        return Some(Vec::new());
    }
    inner.split(',').map(|p| parse_number(p.trim())).collect()
}

fn parse_words(s: &str) -> Option<Vec<String>> {
    let inner = s.strip_prefix('[')?.strip_suffix(']')?.trim();
    if inner.is_empty() {
        return Some(Vec::new());
    }
    Some(inner.split(',').map(|p| p.trim().to_string()).collect())
}

impl Reader<'_> {
    fn raw(&self, key: &str) -> Option<Entry> {
        self.section.and_then(|s| s.entries.get(key).cloned())
    }

    fn err(&mut self, line: usize, message: String) {
        self.diags.push(Diagnostic { line, message });
    }

    fn number(&mut self, key: &str, check: impl Fn(f64) -> Option<&'static str>) -> Option<f64> {
        let e = self.raw(key)?;
        match parse_number(&e.value) {
            Some(v) => match check(v) {
                None => Some(v),
                Some(range) => {
                    self.err(e.line, format!("{key} = {} outside {range}", e.value));
                    None
                }
            },
            None => {
                self.err(e.line, format!("{key}: expected a number, got `{}`", e.value));
                None
            }
        }
    }

    fn list(&mut self, key: &str, check: impl Fn(f64) -> Option<&'static str>) -> Option<Vec<f64>> {
        let e = self.raw(key)?;
        // a bare number is a one-element list
        let parsed = parse_list(&e.value).or_else(|| parse_number(&e.value).map(|v| vec![v]));
        match parsed {
            Some(vs) => {
                if let Some(range) = vs.iter().find_map(|&v| check(v)) {
                    self.err(e.line, format!("{key} = {} outside {range}", e.value));
                    None
                } else {
                    Some(vs)
                }
            }
            None => {
                self.err(e.line, format!("{key}: expected a list like [1, 2], got `{}`", e.value));
                None
            }
        }
    }

    fn word(&mut self, key: &str) -> Option<(usize, String)> {
        self.raw(key).map(|e| (e.line, e.value))
    }
}

fn positive(v: f64) -> Option<&'static str> {
    (!(v > 0.0 && v.is_finite())).then_some("(0, inf)")
}

fn nonneg(v: f64) -> Option<&'static str> {
    (!(v >= 0.0 && v.is_finite())).then_some("[0, inf)")
}

fn any_finite(v: f64) -> Option<&'static str> {
    (!v.is_finite()).then_some("the finite reals")
}

fn q_range(v: f64) -> Option<&'static str> {
    (!(v >= 2.0)).then_some("q ∈ [2, inf]")
}

fn parse_preset(line: usize, value: &str, kappa: Option<f64>, diags: &mut Vec<Diagnostic>) -> Option<Preset> {
    let mut words = value.split_whitespace();
    let name = words.next().unwrap_or("");
    let mut inline_kappa = None;
    for w in words {
        match w.strip_prefix("kappa=").map(parse_number) {
            Some(Some(k)) if k.is_finite() => inline_kappa = Some(k),
            _ => {
                diags.push(Diagnostic { line, message: format!("preset: unexpected `{w}`") });
                return None;
            }
        }
    }
    if name != "schrodinger_shifted" && (inline_kappa.is_some() || kappa.is_some()) {
        diags.push(Diagnostic { line, message: format!("kappa applies only to schrodinger_shifted, not `{name}`") });
        return None;
    }
    match name {
        "schrodinger" => Some(Preset::Schrodinger),
        "gap" => Some(Preset::Gap),
        "definite" => Some(Preset::Definite),
        "tilted" => Some(Preset::Tilted),
        "schrodinger_shifted" => {
            let k = match (inline_kappa, kappa) {
                (Some(a), Some(b)) if a != b => {
                    diags.push(Diagnostic { line, message: format!("kappa given twice ({a} and {b})") });
                    return None;
                }
                (Some(a), _) | (None, Some(a)) => a,
                (None, None) => 1.0,
            };
            if k <= 0.0 {
                diags.push(Diagnostic { line, message: format!("kappa = {k} outside (0, inf)") });
                return None;
            }
            Some(Preset::SchrodingerShifted(k))
        }
        _ => {
            diags.push(Diagnostic {
                line,
                message: format!(
                    "unknown preset `{name}` (expected schrodinger, schrodinger_shifted, gap, definite, tilted)"
                ),
            });
            None
        }
    }
}

fn parse_kind(line: usize, value: &str, diags: &mut Vec<Diagnostic>) -> Option<WitnessKind> {
    match value {
        "gaussian" => Some(WitnessKind::Gaussian),
        "flat_spectrum" => Some(WitnessKind::FlatSpectrum),
        "band_bump" => Some(WitnessKind::BandBump),
        _ => {
            diags.push(Diagnostic {
                line,
                message: format!("unknown data kind `{value}` (expected gaussian, flat_spectrum, band_bump)"),
            });
            None
        }
    }
}

/// Reads a scenario file. Either every line is valid and a full configuration comes back,
/// or the complete list of diagnostics does.
pub fn parse_scenario(text: &str) -> Result<ScenarioFile, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let mut sections: HashMap<String, (usize, Section)> = HashMap::new();
    let mut current: Option<String> = None;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let name = name.trim().to_string();
            if !SECTIONS.contains(&name.as_str()) {
                diags.push(Diagnostic { line, message: format!("unknown section [{name}]") });
                current = None;
                continue;
            }
            if let Some((first, _)) = sections.get(&name) {
                diags.push(Diagnostic {
                    line,
                    message: format!("duplicate section [{name}] (first at line {first}, again at line {line})"),
                });
                current = None;
                continue;
            }
            sections.insert(name.clone(), (line, Section { entries: HashMap::new() }));
            current = Some(name);
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            diags.push(Diagnostic { line, message: format!("expected `name = value`, got `{content}`") });
            continue;
        };
        let (key, value) = (key.trim().to_string(), value.trim().to_string());
        let Some(sec) = current.clone() else {
            diags.push(Diagnostic { line, message: format!("key `{key}` outside a valid section") });
            continue;
        };
        if !allowed_keys(&sec).contains(&key.as_str()) {
            diags.push(Diagnostic { line, message: format!("unknown key `{key}` in [{sec}]") });
            continue;
        }
        let entries = &mut sections.get_mut(&sec).expect("section registered").1.entries;
        if let Some(prev) = entries.get(&key) {
            diags.push(Diagnostic {
                line,
                message: format!("duplicate key `{key}` (first at line {}, again at line {line})", prev.line),
            });
            continue;
        }
        entries.insert(key, Entry { line, value });
    }

    if sections.is_empty() {
        return if diags.is_empty() { Ok(ScenarioFile { scenario: None }) } else { Err(diags) };
    }
    let Some((disp_line, _)) = sections.get("dispersion").map(|(l, s)| (*l, s)) else {
        diags.push(Diagnostic { line: 1, message: "missing section [dispersion]".into() });
        diags.sort_by_key(|d| d.line);
        return Err(diags);
    };
    let config = build_config(&sections, disp_line, &mut diags);
    diags.sort_by_key(|d| d.line);
    match config {
        Some(c) if diags.is_empty() => Ok(ScenarioFile { scenario: Some(c) }),
        _ => Err(diags),
    }
}

fn reader<'a>(
    sections: &'a HashMap<String, (usize, Section)>,
    name: &str,
    diags: &'a mut Vec<Diagnostic>,
) -> Reader<'a> {
    let found = sections.get(name);
    Reader { section: found.map(|(_, s)| s), header: found.map(|(l, _)| *l).unwrap_or(0), diags }
}

fn build_config(
    sections: &HashMap<String, (usize, Section)>,
    disp_line: usize,
    diags: &mut Vec<Diagnostic>,
) -> Option<ScenarioConfig> {
    let n_before = diags.len();

    // [dispersion]
    let mut r = reader(sections, "dispersion", diags);
    let kappa = r.number("kappa", any_finite);
    let preset_entry = r.word("preset");
    let label = r.word("label").map(|(_, v)| v);
    let coeff = |r: &mut Reader, key: &str| -> Option<(usize, DispersionRelation)> {
        let line = r.raw(key)?.line;
        let vs = r.list(key, any_finite)?;
        match DispersionRelation::new(&vs) {
            Ok(p) => Some((line, p)),
            Err(e) => {
                r.err(line, format!("{key}: {e}"));
                None
            }
        }
    };
    let a = coeff(&mut r, "a");
    let b = coeff(&mut r, "b");
    let c = coeff(&mut r, "c");
    let preset = match preset_entry {
        Some((line, v)) => parse_preset(line, &v, kappa, r.diags),
        None => {
            if kappa.is_some() {
                r.err(disp_line, "kappa given without preset = schrodinger_shifted".into());
            }
            None
        }
    };
    let triple = match preset {
        Some(p) => {
            let t = p.triple();
            Some(DispersionTriple::new(
                a.map(|x| x.1).unwrap_or(t.a),
                b.map(|x| x.1).unwrap_or(t.b),
                c.map(|x| x.1).unwrap_or(t.c),
            ))
        }
        None => match (a, b, c) {
            (Some(a), Some(b), Some(c)) => Some(DispersionTriple::new(a.1, b.1, c.1)),
            _ => {
                if r.raw("preset").is_none() {
                    r.err(disp_line, "[dispersion] needs a preset or all of a, b, c".into());
                }
                None
            }
        },
    };
    let defaults = preset.map(|p| p.defaults());
    let label = label.unwrap_or_else(|| preset.map(|p| p.name()).unwrap_or("custom").to_string());

    // [symbol]
    let mut r = reader(sections, "symbol", diags);
    let d_sym = defaults.as_ref().map(|d| d.symbol);
    let center = match r.list("center", any_finite) {
        Some(v) if v.len() == 2 => Some((v[0], v[1])),
        Some(_) => {
            let line = r.raw("center").map(|e| e.line).unwrap_or(r.header);
            r.err(line, "center: expected two values [xi, eta]".into());
            None
        }
        None => d_sym.map(|s| s.center),
    };
    let radius = r.number("radius", positive).or(d_sym.map(|s| s.radius));
    let plateau = r
        .number("plateau", |v| (!(v > 0.0 && v < 1.0)).then_some("(0, 1)"))
        .or(d_sym.map(|s| s.plateau))
        .or(Some(0.5));
    let symbol = match (center, radius, plateau) {
        (Some(center), Some(radius), Some(plateau)) => Some(SymbolConfig { center, radius, plateau }),
        _ => {
            if preset.is_none() {
                let line = r.header.max(disp_line);
                r.err(line, "[symbol] needs center and radius when no preset supplies them".into());
            }
            None
        }
    };

    // [data]
    let mut r = reader(sections, "data", diags);
    let field = |r: &mut Reader, p: &str, default: Option<DataSpec>| -> Option<DataSpec> {
        let kind = match r.word(&format!("{p}_kind")) {
            Some((line, v)) => parse_kind(line, &v, r.diags),
            None => Some(default.map(|d| d.kind).unwrap_or(WitnessKind::Gaussian)),
        };
        let center_x = r.number(&format!("{p}_center_x"), any_finite).or(default.map(|d| d.center_x)).or(Some(0.0));
        let freq = r.number(&format!("{p}_freq"), any_finite).or(default.map(|d| d.center_freq));
        let width = r.number(&format!("{p}_width"), positive).or(default.map(|d| d.width));
        match (kind, center_x, freq, width) {
            (Some(kind), Some(center_x), Some(center_freq), Some(width)) => {
                Some(DataSpec { kind, center_x, center_freq, width })
            }
            _ => {
                if preset.is_none() {
                    let line = r.header.max(disp_line);
                    r.err(line, format!("[data] needs {p}_freq and {p}_width when no preset supplies them"));
                }
                None
            }
        }
    };
    let f = field(&mut r, "f", defaults.as_ref().map(|d| d.f));
    let g = field(&mut r, "g", defaults.as_ref().map(|d| d.g));

    // [experiments]
    let mut r = reader(sections, "experiments", diags);
    let explicit = r.list("times", positive);
    let from = r.number("t_from", positive);
    let to = r.number("t_to", positive);
    let n = r.number("n_times", |v| (!(v >= 2.0 && v.fract() == 0.0)).then_some("integers ≥ 2"));
    let times = match (explicit, from, to) {
        (Some(t), None, None) => Some(t),
        (None, Some(a), Some(b)) if b > a => Some(log_spaced(a, b, n.unwrap_or(10.0) as usize)),
        (None, None, None) => Some(defaults.as_ref().map(|d| d.times.clone()).unwrap_or_default()),
        _ => {
            let line = r.raw("times").or(r.raw("t_from")).or(r.raw("t_to")).map(|e| e.line).unwrap_or(r.header);
            r.err(line, "give either times = [...] or t_from < t_to (with optional n_times)".into());
            None
        }
    };
    let q = r.list("q", q_range).or(defaults.as_ref().map(|d| d.q.clone())).unwrap_or_else(|| vec![2.0]);
    let weights = r.list("weights", nonneg).or(defaults.as_ref().map(|d| d.weights.clone())).unwrap_or_default();
    let regime = match r.word("regime") {
        Some((line, v)) => Regime::from_tag(&v).or_else(|| {
            let tags: Vec<&str> = Regime::ALL.iter().map(|r| r.tag()).collect();
            r.err(line, format!("unknown regime `{v}` (expected one of {})", tags.join(", ")));
            None
        }),
        None => Some(defaults.as_ref().map(|d| d.regime).unwrap_or(Regime::Thm32)),
    };
    let data_weight = r.number("data_weight", nonneg).or(defaults.as_ref().map(|d| d.data_weight)).unwrap_or(0.0);
    let lower_q = r.list("lower_q", q_range).unwrap_or_default();
    let strichartz = match r.list("strichartz", positive) {
        Some(v) if v.len() == 4 => {
            let line = r.raw("strichartz").map(|e| e.line).unwrap_or(r.header);
            if v[0] < 2.0 || v[1] < 2.0 || v[2] >= v[3] {
                r.err(line, "strichartz = [p, q, T1, T2] needs p, q ∈ [2, inf) and T1 < T2".into());
                None
            } else {
                Some((v[0], v[1], v[2], v[3]))
            }
        }
        Some(_) => {
            let line = r.raw("strichartz").map(|e| e.line).unwrap_or(r.header);
            r.err(line, "strichartz: expected [p, q, T1, T2]".into());
            None
        }
        None => None,
    };
    let scaling = match r.raw("scaling") {
        Some(e) => match parse_words(&e.value) {
            Some(words) => {
                let mut out = Vec::new();
                for w in words {
                    match ScalingFamily::from_tag(&w) {
                        Some(f) => out.push(f),
                        None => r.err(e.line, format!("unknown scaling family `{w}`")),
                    }
                }
                out
            }
            None => {
                r.err(e.line, "scaling: expected a list like [ball, curve_nonchar]".into());
                Vec::new()
            }
        },
        None => Vec::new(),
    };
    let oscillatory = match r.word("oscillatory") {
        Some((_, v)) if v == "true" => true,
        Some((_, v)) if v == "false" => false,
        Some((line, v)) => {
            r.err(line, format!("oscillatory: expected true or false, got `{v}`"));
            false
        }
        None => false,
    };

    // [grid]
    let mut r = reader(sections, "grid", diags);
    let t_last = times.as_ref().and_then(|t| t.iter().copied().reduce(f64::max)).unwrap_or(0.0);
    let t_last = strichartz.map(|s| s.3.max(t_last)).unwrap_or(t_last);
    let t_max = r.number("t_max", positive);
    if let Some(tm) = t_max {
        if tm < t_last {
            let line = r.raw("t_max").map(|e| e.line).unwrap_or(r.header);
            r.err(line, format!("t_max = {tm} below the latest requested time {t_last}"));
        }
    }
    let t_max = t_max.unwrap_or(t_last.max(1.0));
    let int = |v: f64| (!(v >= 1.0 && v.fract() == 0.0)).then_some("positive integers");
    let resolution = r.number("resolution", |v| int(v).or((v < 64.0).then_some("[64, inf)"))).unwrap_or(128.0) as usize;
    let padding = r.number("padding", int).unwrap_or(2.0) as usize;

    if diags.len() > n_before {
        return None;
    }
    Some(ScenarioConfig {
        label,
        preset,
        triple: triple?,
        symbol: symbol?,
        f: f?,
        g: g?,
        t_max,
        resolution,
        padding,
        experiments: Experiments {
            times: times?,
            q,
            weights,
            regime: regime?,
            data_weight,
            lower_q,
            strichartz,
            scaling,
            oscillatory,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file_gets_defaults() {
        let f = parse_scenario("[dispersion]\npreset = schrodinger_shifted\n").unwrap();
        let sc = f.scenario.unwrap();
        let c = 0.5f64.sqrt();
        assert_eq!(sc.preset, Some(Preset::SchrodingerShifted(1.0)));
        assert_eq!(sc.label, "schrodinger_shifted");
        assert_eq!(sc.symbol.center, (c, c));
        assert_eq!(sc.f.width, 2.0);
        assert_eq!(sc.experiments.regime, Regime::Thm44);
        assert_eq!(sc.t_max, 1000.0);
        assert_eq!(sc.resolution, 128);
    }

    #[test]
    fn q_below_two_is_a_range_error() {
        let err = parse_scenario("[dispersion]\npreset = gap\n[experiments]\nq = 1.5\n").unwrap_err();
        assert_eq!(err.len(), 1);
        assert_eq!(err[0].line, 4);
        assert!(err[0].message.contains("q ∈ [2, inf]"));
    }

    #[test]
    fn duplicate_section_names_both_lines() {
        let text = "[dispersion]\npreset = gap\n\n[grid]\nt_max = 600\n[grid]\n";
        let err = parse_scenario(text).unwrap_err();
        assert!(err[0].message.contains("line 4") && err[0].message.contains("line 6"), "{}", err[0]);
    }

    #[test]
    fn unknown_keys_and_sections_are_rejected() {
        let err = parse_scenario("[dispersion]\npreset = gap\nspeed = 3\n[extra]\n").unwrap_err();
        let lines: Vec<usize> = err.iter().map(|d| d.line).collect();
        assert_eq!(lines, vec![3, 4]);
    }

    #[test]
    fn missing_dispersion_section() {
        let err = parse_scenario("[grid]\nt_max = 5\n").unwrap_err();
        assert!(err[0].message.contains("missing section [dispersion]"));
    }

    #[test]
    fn empty_file_is_an_empty_list() {
        assert_eq!(parse_scenario("# nothing here\n\n").unwrap().scenario, None);
    }

    #[test]
    fn explicit_triple_and_inline_kappa() {
        let text = "[dispersion]\na = [0, 0, 1]\nb = [2, 0, 1]\nc = [0, 0, 1]\n\
                    [symbol]\ncenter = [1, 1]\nradius = 0.5\n[data]\nf_freq = 1\nf_width = 4\ng_freq = 1\ng_width = 4\n";
        let sc = parse_scenario(text).unwrap().scenario.unwrap();
        assert_eq!(sc.triple, DispersionTriple::schrodinger_shifted(2.0));
        let sc = parse_scenario("[dispersion]\npreset = schrodinger_shifted kappa=2\n").unwrap().scenario.unwrap();
        assert_eq!(sc.preset, Some(Preset::SchrodingerShifted(2.0)));
    }

    #[test]
    fn custom_triple_needs_symbol_and_data() {
        let err = parse_scenario("[dispersion]\na = [0, 0, 1]\nb = [0, 0, 1]\nc = [0, 0, 1]\n").unwrap_err();
        assert!(err.iter().any(|d| d.message.contains("[symbol]")));
        assert!(err.iter().any(|d| d.message.contains("[data]")));
    }

    #[test]
    fn t_max_must_cover_times() {
        let err = parse_scenario("[dispersion]\npreset = gap\n[grid]\nt_max = 100\n").unwrap_err();
        assert!(err[0].message.contains("below the latest requested time"));
    }

    #[test]
    fn comments_and_lists() {
        let text = "# header\n[dispersion]  # trailing\npreset = gap\n[experiments]\ntimes = [20, 40, 80]\nq = [2, 4, inf]\n\
                    scaling = [ball, interval_truncation]\nstrichartz = [4, 4, 100, 200]\noscillatory = true\n";
        let sc = parse_scenario(text).unwrap().scenario.unwrap();
        assert_eq!(sc.experiments.times, vec![20.0, 40.0, 80.0]);
        assert_eq!(sc.experiments.q, vec![2.0, 4.0, f64::INFINITY]);
        assert_eq!(sc.experiments.scaling, vec![ScalingFamily::Ball, ScalingFamily::IntervalTruncation]);
        assert_eq!(sc.experiments.strichartz, Some((4.0, 4.0, 100.0, 200.0)));
        assert_eq!(sc.t_max, 200.0);
        assert!(sc.experiments.oscillatory);
    }
}
