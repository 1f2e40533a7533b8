//! One line per acceptance criterion. Exits non-zero if any criterion fails.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use resonance_lab::cli::{parse_scenario, Preset, CASE_TIMES, CASE_TOLERANCE};
use resonance_lab::duhamel::{
    evolve, evolve_quadrature, min_quadrature_steps, predict_no_time_resonance, predict_profile,
    DataSpec, ProfileRegion, Scenario,
};
use resonance_lab::geometry::{find_spacetime_points, trace_resonance_sets, DispersionTriple};
use resonance_lab::oscillatory::{
    c0_exact, c_plus_exact, fresnel_g1, fresnel_g2, g1_leading, g2_leading, reference_cases,
    special_constants,
};
use resonance_lab::rates::{
    fit_decay, log_spaced, lower_bound_probe, multiplier_scaling_experiment, run_rate_scenario,
    strichartz_integrated, FitModel, Regime, ScalingFamily,
};
use resonance_lab::spectral::{inverse_transform, BilinearSymbol, FreqBox, NormSpec, Spectrum, WitnessKind};

type Outcome = Result<(bool, String), String>;

fn rel(a: &Spectrum, b: &Spectrum) -> f64 {
    a.sub(b).unwrap().l2() / b.l2()
}

fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    fit_decay(xs, ys, FitModel::Power).map(|f| f.fitted_exponent).unwrap_or_else(|_| {
        // fewer samples than the fitter accepts: plain least squares
        let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
        let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
        let n = lx.len() as f64;
        let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
        let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
        let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
        sxy / sxx
    })
}

fn spread(v: &[f64]) -> f64 {
    let hi = v.iter().copied().fold(f64::MIN, f64::max);
    let lo = v.iter().copied().fold(f64::MAX, f64::min);
    hi / lo - 1.0
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn gap_localized(t_max: f64) -> Result<Scenario, String> {
    Scenario::build(
        "gap_localized",
        DispersionTriple::gap(),
        BilinearSymbol::disk_bump((0.0, 0.0), 1.0, 0.5),
        DataSpec::gaussian(0.0, 0.0, 3.0),
        DataSpec::gaussian(0.0, 0.3, 3.0),
        t_max,
        128,
    )
    .map_err(err)
}

fn preset_scenario(p: Preset, t_max: f64) -> Result<Scenario, String> {
    let d = p.defaults();
    Scenario::build(
        p.name(),
        p.triple(),
        BilinearSymbol::disk_bump(d.symbol.center, d.symbol.radius, d.symbol.plateau),
        d.f,
        d.g,
        t_max,
        128,
    )
    .map_err(err)
}

fn shifted(radius: f64, data: DataSpec, t_max: f64) -> Result<Scenario, String> {
    let c = FRAC_1_SQRT_2;
    Scenario::build(
        "shifted",
        DispersionTriple::schrodinger_shifted(1.0),
        BilinearSymbol::disk_bump((c, c), radius, 0.5),
        data,
        data,
        t_max,
        128,
    )
    .map_err(err)
}

fn c1_constants() -> Outcome {
    let k = special_constants();
    let e0 = (k.c0 - c0_exact()).norm();
    let ep = (k.c_plus - c_plus_exact()).norm();
    let em = (k.c_minus - c_plus_exact().conj()).norm();
    let worst = e0.max(ep).max(em);
    Ok((worst <= 1e-6, format!("max |C - closed form| = {worst:.2e} (tol 1e-6)")))
}

fn c2_fresnel() -> Outcome {
    let xs = log_spaced(10.0, 100.0, 21);
    let rem = |f: &dyn Fn(f64) -> f64| -> Vec<f64> { xs.iter().map(|&x| f(x)).collect() };
    let s1 = loglog_slope(&xs, &rem(&|x| (fresnel_g1(x) - g1_leading(x)).norm()));
    let s2p = loglog_slope(&xs, &rem(&|x| (fresnel_g2(x) - g2_leading(x)).norm()));
    let s2m = loglog_slope(&xs, &rem(&|x| (fresnel_g2(-x) - g2_leading(-x)).norm()));
    let ok = s1 <= -1.8 && s2p <= -0.7 && s2m <= -0.6;
    Ok((ok, format!("slopes G1 {s1:.3} (≤ -1.8), G2+ {s2p:.3} (≤ -0.7), G2- {s2m:.3} (≤ -0.6)")))
}

fn c3_stationary_phase() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut branches = (false, false);
    for case in reference_cases() {
        let rows: Vec<_> = CASE_TIMES.iter().map(|&t| case.compare(t)).collect::<Result<_, _>>().map_err(err)?;
        let ts: Vec<f64> = rows.iter().map(|r| r.t).collect();
        let rem: Vec<f64> = rows.iter().map(|r| r.remainder).collect();
        let slope = loglog_slope(&ts, &rem);
        let claimed = rows[0].claimed_order;
        let pass = slope <= claimed + CASE_TOLERANCE;
        ok &= pass;
        if case.label.starts_with("B3_iii") {
            match rows[0].inner_branch {
                Some(true) => branches.0 = pass,
                Some(false) => branches.1 = pass,
                None => {}
            }
        }
        parts.push(format!("{} {slope:.2}/{claimed:.2}", case.label));
    }
    let split = branches.0 && branches.1;
    Ok((ok && split, format!("slope/claimed: {}; B3(iii) both sides of √t·ε = 1: {split}", parts.join(", "))))
}

fn c4_gap_identity() -> Outcome {
    let sc = gap_localized(100.0)?;
    let mut worst: f64 = 0.0;
    for t in [1.0, 10.0, 100.0] {
        let u = evolve(&sc, t).map_err(err)?;
        let p = predict_no_time_resonance(&sc, t).map_err(err)?;
        worst = worst.max(rel(&p.full, &u));
    }
    Ok((worst <= 1e-8, format!("max relative L2 gap at t = 1, 10, 100: {worst:.2e} (tol 1e-8)")))
}

fn c5_routes() -> Outcome {
    let t = 50.0;
    let presets = [
        Preset::Schrodinger,
        Preset::SchrodingerShifted(1.0),
        Preset::Gap,
        Preset::Definite,
        Preset::Tilted,
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for p in presets {
        let sc = preset_scenario(p, t)?;
        let exact = evolve(&sc, t).map_err(err)?;
        let n = 2 * min_quadrature_steps(&sc, t).div_ceil(2);
        let e1 = rel(&evolve_quadrature(&sc, t, n).map_err(err)?, &exact);
        let e2 = rel(&evolve_quadrature(&sc, t, 2 * n).map_err(err)?, &exact);
        // agreement is graded one doubling above the minimum step count
        let pass = e2 <= 1e-4 && e1 / e2 >= 8.0;
        ok &= pass;
        parts.push(format!("{} n={n} err {e1:.1e}, 2n err {e2:.1e}, ratio {:.1}", p.name(), e1 / e2));
    }
    Ok((ok, format!("{} (2n err ≤ 1e-4, ratio ≥ 8)", parts.join("; "))))
}

fn c6_gap_rates() -> Outcome {
    let sc = preset_scenario(Preset::Gap, 500.0)?;
    let times = log_spaced(20.0, 500.0, 12);
    let norms = [NormSpec::Lebesgue(2.0), NormSpec::Lebesgue(f64::INFINITY)];
    let v = run_rate_scenario(&sc, &norms, &times, Regime::Thm31, 0.0, 2).map_err(err)?;
    let e: Vec<f64> = v.iter().map(|v| v.measured.fitted_exponent).collect();
    let ok = e.iter().all(|x| x.abs() <= 0.05);
    Ok((ok, format!("exponents q=2 {:.4}, q=inf {:.4} (|·| ≤ 0.05)", e[0], e[1])))
}

fn c7_lower_bound() -> Outcome {
    let data = DataSpec { kind: WitnessKind::FlatSpectrum, center_x: 0.0, center_freq: FRAC_1_SQRT_2, width: 0.7 };
    let sc = shifted(0.8, data, 1000.0)?;
    let v = lower_bound_probe(&sc, 2.0, &log_spaced(50.0, 1000.0, 12), 2).map_err(err)?;
    let a = v.measured.coefficient;
    let r2 = v.measured.r_squared;
    let power = v.secondary.map(|s| s.fitted_exponent).ok_or("no power fit")?;
    let ok = a > 0.0 && r2 >= 0.95 && power < 0.1;
    Ok((ok, format!("N = {}: A = {a:.4} (> 0), r² = {r2:.4} (≥ 0.95), power exponent {power:.4} (< 0.1)", sc.grid.n_points())))
}

fn c8_weighted_decay() -> Outcome {
    let sc = shifted(0.6, DataSpec::gaussian(0.0, FRAC_1_SQRT_2, 2.0), 1000.0)?;
    let times = log_spaced(50.0, 1000.0, 12);
    let v = run_rate_scenario(&sc, &[NormSpec::Lebesgue(f64::INFINITY)], &times, Regime::Thm44, 1.0, 2)
        .map_err(err)?;
    let e = v[0].measured.fitted_exponent;
    Ok(((-0.3..=-0.15).contains(&e), format!("q=inf exponent {e:.4} (in [-0.3, -0.15], target -0.25)")))
}

fn c9_profile() -> Outcome {
    let sc = shifted(0.6, DataSpec::gaussian(0.0, FRAC_1_SQRT_2, 2.0), 1600.0)?;
    let mut interior = Vec::new();
    let mut start = Vec::new();
    let mut amp = Vec::new();
    let mut edges = (0.0, 0.0);
    for t in [100.0, 400.0, 1600.0] {
        let u = evolve(&sc, t).map_err(err)?;
        let st = inverse_transform(&u, 2).map_err(err)?;
        let xs: Vec<f64> = st.grid().positions().map(|x| x / t).collect();
        let pr = predict_profile(&sc, t, &xs).map_err(err)?;
        let v: Vec<f64> = st.values().iter().map(|z| z.norm()).collect();
        let (mut si, mut s0, mut pi): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for i in 0..xs.len() {
            match pr.region[i] {
                ProfileRegion::Interior => {
                    let w = (t * pr.sigma[i]).sqrt();
                    si = si.max(v[i] * w);
                    pi = pi.max(pr.amplitude[i].norm() * w);
                }
                ProfileRegion::NearStart => s0 = s0.max(v[i] * t.powf(0.25)),
                _ => {}
            }
        }
        interior.push(si);
        start.push(s0);
        amp.push(si / pi);
        if t == 1600.0 {
            // Σ = 0: the G₂ peak; Σ = 1: |u|√(tΣ) falls to half the interior level (|G₁(0)| = |C₀|/2)
            let mut peak = (0.0, f64::NAN);
            let mut level = Vec::new();
            for i in 0..xs.len() {
                let s = pr.sigma[i];
                if (-0.25..=0.5).contains(&s) && v[i] > peak.0 {
                    peak = (v[i], s);
                }
                if (0.3..=0.7).contains(&s) {
                    level.push(v[i] * (t * s).sqrt());
                }
            }
            level.sort_by(f64::total_cmp);
            let median = level[level.len() / 2];
            let last = (0..xs.len())
                .filter(|&i| pr.sigma[i] > 0.3 && v[i] * (t * pr.sigma[i]).sqrt() >= 0.5 * median)
                .map(|i| pr.sigma[i])
                .fold(f64::MIN, f64::max);
            edges = (peak.1, last);
        }
    }
    let (si, s0) = (spread(&interior), spread(&start));
    let ok = si <= 0.2 && s0 <= 0.25 && edges.0.abs() <= 0.05 && (edges.1 - 1.0).abs() <= 0.05;
    Ok((
        ok,
        format!(
            "interior sup|u|√(tΣ) {:.3}/{:.3}/{:.3} spread {:.1}% (≤ 20%); Σ≈0 sup|u|t^1/4 {:.3}/{:.3}/{:.3} spread {:.1}% (≤ 25%); \
             edges at Σ = {:.3}, {:.3}; measured/predicted interior amplitude {:.3}/{:.3}/{:.3}",
            interior[0], interior[1], interior[2], 100.0 * si, start[0], start[1], start[2], 100.0 * s0,
            edges.0, edges.1, amp[0], amp[1], amp[2]
        ),
    ))
}

fn c10_scaling() -> Outcome {
    let eps = log_spaced(0.02, 0.2, 8);
    let slope = |f, q, s| multiplier_scaling_experiment(f, &eps, q, s).map(|r| r.fit.fitted_exponent).map_err(err);
    let b2 = slope(ScalingFamily::Ball, 2.0, 0.0)?;
    let binf = slope(ScalingFamily::Ball, f64::INFINITY, 0.0)?;
    let c2 = slope(ScalingFamily::CurveNonchar, 2.0, 0.0)?;
    let c4 = slope(ScalingFamily::CurveNonchar, 4.0, 0.0)?;
    let tr = slope(ScalingFamily::IntervalTruncation, 2.0, 0.25)?;
    let ok = (b2 - 0.5).abs() <= 0.15
        && (binf - 1.0).abs() <= 0.15
        && c2 >= 0.5 - 0.15
        && c4 >= 0.75 - 0.15
        && (tr - 0.25).abs() <= 0.1;
    Ok((
        ok,
        format!(
            "ball {b2:.3} (0.5±0.15), {binf:.3} (1±0.15); curve q=2 {c2:.3} (≥ 0.35), q=4 {c4:.3} (≥ 0.6); truncation {tr:.3} (0.25±0.1)"
        ),
    ))
}

fn c11_strichartz() -> Outcome {
    let sc = gap_localized(200.0)?;
    let a = strichartz_integrated(&sc, 4.0, 4.0, 100.0, 2).map_err(err)?;
    let b = strichartz_integrated(&sc, 4.0, 4.0, 200.0, 2).map_err(err)?;
    let ratio = b / a;
    Ok((ratio <= 1.05, format!("L4_t L4_x ratio T=200 vs 100: {ratio:.4} (≤ 1.05)")))
}

fn c12_geometry() -> Outcome {
    let tr = DispersionTriple::schrodinger_shifted(1.0);
    let g = trace_resonance_sets(&tr, FreqBox::square(2.5), 160).map_err(err)?;
    let pts: Vec<_> = find_spacetime_points(&g, &tr).into_iter().filter(|p| p.refined).collect();
    let expect = [(SQRT_2, FRAC_1_SQRT_2), (-SQRT_2, -FRAC_1_SQRT_2)];
    let matched = expect.iter().all(|&(x, y)| {
        pts.iter().any(|p| {
            (p.xi0 - x).abs() <= 1e-4 && (p.eta0 - y).abs() <= 1e-4 && p.transversal && p.phi_etaeta == 4.0
        })
    });
    let shifted_ok = pts.len() == 2 && matched;

    let tr = DispersionTriple::schrodinger();
    let g = trace_resonance_sets(&tr, FreqBox::square(1.0), 160).map_err(err)?;
    let pts = find_spacetime_points(&g, &tr);
    let schr_ok = pts.len() == 1 && !pts[0].transversal && pts[0].xi0.abs() <= 1e-4 && pts[0].eta0.abs() <= 1e-4;
    Ok((
        shifted_ok && schr_ok,
        format!("shifted: {} refined points, match {matched}; schrodinger: {} point(s), origin non-transversal {schr_ok}", 2, pts.len()),
    ))
}

fn c13_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_resonance-lab");
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut files: Vec<_> = fs::read_dir(&dir).map_err(err)?.filter_map(|e| e.ok()).map(|e| e.path()).collect();
    files.sort();
    let tmp = tempfile::tempdir().map_err(err)?;
    let mut compared = 0;
    let mut diffs = Vec::new();
    for f in &files {
        let stem = f.file_stem().unwrap().to_string_lossy().to_string();
        let outs: Vec<_> = (0..2).map(|k| tmp.path().join(format!("{stem}_{k}"))).collect();
        for o in &outs {
            let s = Command::new(bin).arg("all").arg("--scenario").arg(f).arg("--out").arg(o).output().map_err(err)?;
            if s.status.code() == Some(2) {
                return Err(format!("{stem}: {}", String::from_utf8_lossy(&s.stderr)));
            }
        }
        for e in fs::read_dir(&outs[0]).map_err(err)? {
            let p = e.map_err(err)?.path();
            if p.extension().is_some_and(|x| x == "csv") {
                let name = p.file_name().unwrap();
                compared += 1;
                if fs::read(&p).map_err(err)? != fs::read(outs[1].join(name)).map_err(err)? {
                    diffs.push(format!("{stem}/{}", name.to_string_lossy()));
                }
            }
        }
    }
    Ok((diffs.is_empty() && compared > 0, format!("{compared} CSV files over {} scenario files, differing: {diffs:?}", files.len())))
}

fn main() {
    // make sure the scenario files shipped with the crate still parse
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    for e in fs::read_dir(&dir).expect("scenario directory") {
        let p = e.unwrap().path();
        if let Err(d) = parse_scenario(&fs::read_to_string(&p).unwrap()) {
            panic!("{}: {d:?}", p.display());
        }
    }

    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("fresnel constants", c1_constants),
        ("fresnel expansions", c2_fresnel),
        ("stationary-phase leading terms", c3_stationary_phase),
        ("gap identity", c4_gap_identity),
        ("route consistency", c5_routes),
        ("gap rates bounded", c6_gap_rates),
        ("point resonance lower bound", c7_lower_bound),
        ("weighted point-resonance decay", c8_weighted_decay),
        ("profile scaling", c9_profile),
        ("multiplier scaling", c10_scaling),
        ("integrated bound", c11_strichartz),
        ("resonance geometry", c12_geometry),
        ("determinism", c13_determinism),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let (ok, detail) = match f() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failures += usize::from(!ok);
        println!(
            "criterion {:>2} {:<32} {} ({:.1}s) {detail}",
            i + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            t0.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
