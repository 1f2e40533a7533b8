use num_complex::Complex64;

use super::*;
use crate::error::Error;
use crate::geometry::DispersionTriple;
use crate::spectral::{apply_bilinear_multiplier, apply_linear_group, BilinearSymbol, FreqBox};

fn rel(a: &Spectrum, b: &Spectrum) -> f64 {
    a.sub(b).unwrap().l2() / b.l2()
}

fn gap_scenario(t_max: f64) -> Scenario {
    Scenario::build(
        "gap",
        DispersionTriple::gap(),
        BilinearSymbol::disk_bump((0.0, 0.0), 1.0, 0.5),
        DataSpec::gaussian(0.0, 0.0, 3.0),
        DataSpec::gaussian(0.0, 0.3, 3.0),
        t_max,
        64,
    )
    .unwrap()
}

fn shifted_scenario(t_max: f64) -> Scenario {
    let c = std::f64::consts::FRAC_1_SQRT_2;
    Scenario::build(
        "shifted",
        DispersionTriple::schrodinger_shifted(1.0),
        BilinearSymbol::disk_bump((c, c), 0.3, 0.5),
        DataSpec::gaussian(0.0, c, 4.0),
        DataSpec::gaussian(0.0, c, 4.0),
        t_max,
        64,
    )
    .unwrap()
}

#[test]
fn symbol_limits() {
    let tr = DispersionTriple::schrodinger();
    let m = BilinearSymbol::constant(Complex64::new(1.0, 0.0), FreqBox::square(2.0));
    assert!(duhamel_symbol(&tr, &m, 0.0).eval(0.3, 0.4).norm() == 0.0);
    // φ = −2ξη vanishes on the axes
    let v = duhamel_symbol(&tr, &m, 7.0).eval(0.0, 1.3);
    assert!((v.norm() - 7.0).abs() < 1e-14);
    let gap = DispersionTriple::gap();
    let m = BilinearSymbol::disk_bump((0.0, 0.0), 1.0, 0.5);
    for t in [0.5, 3.0, 40.0] {
        let d = duhamel_symbol(&gap, &m, t);
        for i in -10..=10 {
            for j in -10..=10 {
                let (x, y) = (0.1 * i as f64, 0.1 * j as f64);
                assert!(d.eval(x, y).norm() <= 2.0 / 8.0 * m.eval(x, y).norm() + 1e-15);
            }
        }
    }
}

#[test]
fn kernel_is_the_time_integral() {
    for (phi, t) in [(0.0, 2.0), (1e-3, 5.0), (0.7, 3.0), (-2.0, 10.0)] {
        let exact = if phi == 0.0 {
            Complex64::new(t, 0.0)
        } else {
            (Complex64::from_polar(1.0, t * phi) - 1.0) / (Complex64::new(0.0, phi))
        };
        assert!((time_kernel(phi, t) - exact).norm() < 1e-12 * t, "{phi} {t}");
    }
    // where the quotient cancels, compare with its Taylor series
    let (phi, t) = (1e-9, 5.0);
    let taylor = t * (Complex64::new(1.0, 0.5 * t * phi) - (t * phi).powi(2) / 6.0);
    assert!((time_kernel(phi, t) - taylor).norm() < 1e-15 * t);
}

#[test]
fn zero_time_and_zero_data() {
    let sc = gap_scenario(10.0);
    assert_eq!(evolve(&sc, 0.0).unwrap().l2(), 0.0);
    let mut z = sc.clone();
    z.g.spectrum = Spectrum::zeros(sc.grid);
    assert_eq!(evolve(&z, 5.0).unwrap().l2(), 0.0);
    let mut z = sc.clone();
    z.symbol = BilinearSymbol::zero();
    assert_eq!(evolve_quadrature(&z, 5.0, 2).unwrap().l2(), 0.0);
}

#[test]
fn small_time_taylor() {
    let sc = shifted_scenario(1.0);
    let first = apply_bilinear_multiplier(&sc.symbol, sc.f_hat(), sc.g_hat()).unwrap();
    let mut errs = Vec::new();
    for t in [1e-3, 1e-2] {
        let lin = apply_linear_group(&first, &sc.triple.a, t).scaled(Complex64::new(0.0, -t));
        errs.push(evolve(&sc, t).unwrap().sub(&lin).unwrap().l2());
    }
    let slope = (errs[1] / errs[0]).log10();
    assert!(slope >= 1.9, "slope {slope}");
}

#[test]
fn bilinear_in_each_argument() {
    let sc = shifted_scenario(5.0);
    let u = evolve(&sc, 3.0).unwrap();
    let mut s2 = sc.clone();
    let k = Complex64::new(0.3, -1.7);
    s2.f.spectrum = sc.f_hat().scaled(k);
    let v = evolve(&s2, 3.0).unwrap();
    assert!(rel(&v, &u.scaled(k)) < 1e-12);
    let mut s3 = sc.clone();
    s3.g.spectrum = sc.g_hat().add(&sc.g_hat().scaled(k)).unwrap();
    let w = evolve(&s3, 3.0).unwrap();
    assert!(rel(&w, &u.scaled(k + 1.0)) < 1e-12);
}

#[test]
fn gap_identity_is_exact() {
    let sc = gap_scenario(100.0);
    for t in [1.0, 10.0, 100.0] {
        let p = predict_no_time_resonance(&sc, t).unwrap();
        assert!(rel(&p.full, &evolve(&sc, t).unwrap()) < 1e-8, "t = {t}");
    }
    let p = predict_no_time_resonance(&sc, 0.0).unwrap();
    assert!(p.full.l2() <= 1e-10 * p.asymptotic.l2());
}

#[test]
fn identity_refused_when_phi_vanishes() {
    let sc = shifted_scenario(10.0);
    assert!(matches!(predict_no_time_resonance(&sc, 1.0), Err(Error::Hypothesis(_))));
}

#[test]
fn quadrature_route_agrees() {
    let sc = shifted_scenario(10.0);
    let exact = evolve(&sc, 10.0).unwrap();
    let n0 = min_quadrature_steps(&sc, 10.0);
    assert!(matches!(
        evolve_quadrature(&sc, 10.0, n0 - 1),
        Err(Error::UnderResolved { .. })
    ));
    let n = 2 * n0.div_ceil(2);
    let e1 = rel(&evolve_quadrature(&sc, 10.0, n).unwrap(), &exact);
    let e2 = rel(&evolve_quadrature(&sc, 10.0, 2 * n).unwrap(), &exact);
    assert!(e1 <= 1e-4, "{e1}");
    assert!(e1 / e2 >= 8.0, "{e1} {e2}");
}

#[test]
fn wrap_budget_enforced() {
    let sc = gap_scenario(20.0);
    assert!(evolve(&sc, 20.0).is_ok());
    match evolve(&sc, 2000.0) {
        Err(Error::WrapAround { required, length, .. }) => assert!(required > length),
        other => panic!("{other:?}"),
    }
}

fn tilted_scenario(t_max: f64) -> Scenario {
    Scenario::build(
        "tilted",
        DispersionTriple::tilted(),
        BilinearSymbol::disk_bump((1.0, -1.0 / 3.0), 0.3, 0.5),
        DataSpec::gaussian(0.0, 1.0, 16.0),
        DataSpec::gaussian(0.0, -1.0 / 3.0, 16.0),
        t_max,
        64,
    )
    .unwrap()
}

#[test]
fn truncation_limits() {
    let sc = tilted_scenario(30.0);
    let u = evolve(&sc, 30.0).unwrap();
    assert!(rel(&predict_truncated_duhamel(&sc, 30.0, 30.0).unwrap(), &u) < 1e-14);
    assert_eq!(predict_truncated_duhamel(&sc, 30.0, 0.0).unwrap().l2(), 0.0);
    assert!(matches!(
        predict_truncated_duhamel(&shifted_scenario(5.0), 5.0, 1.0),
        Err(Error::Hypothesis(_))
    ));
}

#[test]
fn shifted_profile_regions() {
    let sc = shifted_scenario(10.0);
    let p = sc.resonant_point().unwrap();
    let r2 = 2f64.sqrt();
    assert!((p.xi0 - r2).abs() < 1e-9 && (p.eta0 - r2 / 2.0).abs() < 1e-9);
    assert!((p.phi_xi + r2).abs() < 1e-9);
    let a1 = sc.triple.a.d1(p.xi0);
    let xs: Vec<f64> = (0..=400).map(|i| -a1 - 1.0 + 3.0 * i as f64 / 400.0).collect();
    let pr = predict_profile(&sc, 10.0, &xs).unwrap();
    assert!((sigma_of(&sc, &p, -a1)).abs() < 1e-12);
    for (x, s) in xs.iter().zip(&pr.sigma) {
        assert!((s - (a1 + x) / r2).abs() < 1e-12);
    }
    let tags: std::collections::BTreeSet<_> = pr.region.iter().map(|r| r.tag()).collect();
    assert_eq!(tags.len(), 5);
    // det Hess ψ = −Σ Φ_ξ² Φ_ηη
    let h = psi_hessian(&sc, &p, 0.4);
    assert!((h.determinant() + 0.4 * p.phi_xi.powi(2) * p.phi_etaeta).abs() < 1e-10);
    assert!(pr.a1.norm() > 0.0 && (pr.kappa1 - 1.0).abs() < 1e-12);
}

#[test]
fn batch_is_sorted() {
    let a = gap_scenario(10.0);
    let b = shifted_scenario(10.0);
    let out = evolve_batch(&[(&b, 2.0), (&a, 3.0), (&a, 1.0)]);
    let keys: Vec<_> = out.iter().map(|r| (r.0, r.1)).collect();
    assert_eq!(keys, vec![("gap", 1.0), ("gap", 3.0), ("shifted", 2.0)]);
}
