use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FitModel {
    /// `log v = e·log t + c`.
    Power,
    /// `log v = e·log t + p·log log t + c` with `p ∈ {0, 1}` picked by residual.
    PowerLog,
    /// `v = A·log t + B`.
    PureLog,
}

impl FitModel {
    pub fn tag(&self) -> &'static str {
        match self {
            FitModel::Power => "power",
            FitModel::PowerLog => "power_log",
            FitModel::PureLog => "pure_log",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub model: FitModel,
    pub fitted_exponent: f64,
    pub fitted_log_power: f64,
    /// `A` of the pure-log model, the prefactor `e^c` otherwise.
    pub coefficient: f64,
    /// `B` of the pure-log model, zero otherwise.
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub residual_max: f64,
}

struct Line {
    slope: f64,
    intercept: f64,
    r_squared: f64,
    residual_max: f64,
    residual_ss: f64,
}

fn line_fit(x: &[f64], y: &[f64]) -> Line {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let res: Vec<f64> = x.iter().zip(y).map(|(a, b)| b - intercept - slope * a).collect();
    let residual_ss: f64 = res.iter().map(|r| r * r).sum();
    // a perfectly flat series is fitted exactly by a zero slope
    let r_squared = if syy == 0.0 { 1.0 } else { (1.0 - residual_ss / syy).clamp(0.0, 1.0) };
    Line {
        slope,
        intercept,
        r_squared,
        residual_max: res.iter().fold(0.0, |m, r| m.max(r.abs())),
        residual_ss,
    }
}

/// Least-squares fit of a growth or decay law to positive samples.
pub fn fit_decay(times: &[f64], values: &[f64], model: FitModel) -> Result<FitResult> {
    if times.len() != values.len() {
        return Err(Error::Domain("times and values differ in length".into()));
    }
    if times.len() < 8 {
        return Err(Error::Domain(format!("at least 8 samples required, got {}", times.len())));
    }
    if times.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::Domain("sample times must be positive and finite".into()));
    }
    let t_min = times.iter().cloned().fold(f64::INFINITY, f64::min);
    let t_max = times.iter().cloned().fold(0.0, f64::max);
    if t_max < 10.0 * t_min * (1.0 - 1e-12) {
        return Err(Error::Domain(format!(
            "samples must span at least one decade, got [{t_min}, {t_max}]"
        )));
    }
    if values.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::Domain("values must be positive and finite".into()));
    }
    let lt: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let window = (t_min, t_max);
    match model {
        FitModel::Power => {
            let lv: Vec<f64> = values.iter().map(|v| v.ln()).collect();
            let l = line_fit(&lt, &lv);
            Ok(FitResult {
                model,
                fitted_exponent: l.slope,
                fitted_log_power: 0.0,
                coefficient: l.intercept.exp(),
                intercept: 0.0,
                r_squared: l.r_squared,
                window,
                residual_max: l.residual_max,
            })
        }
        FitModel::PureLog => {
            let l = line_fit(&lt, values);
            Ok(FitResult {
                model,
                fitted_exponent: 0.0,
                fitted_log_power: 1.0,
                coefficient: l.slope,
                intercept: l.intercept,
                r_squared: l.r_squared,
                window,
                residual_max: l.residual_max,
            })
        }
        FitModel::PowerLog => {
            if t_min <= std::f64::consts::E {
                return Err(Error::Domain("power_log needs t > e so that log log t is defined".into()));
            }
            let llt: Vec<f64> = lt.iter().map(|l| l.ln()).collect();
            let best = [0.0, 1.0]
                .into_iter()
                .map(|p| {
                    let y: Vec<f64> =
                        values.iter().zip(&llt).map(|(v, ll)| v.ln() - p * ll).collect();
                    (p, line_fit(&lt, &y))
                })
                .min_by(|a, b| a.1.residual_ss.total_cmp(&b.1.residual_ss))
                .expect("two candidates");
            let (p, l) = best;
            Ok(FitResult {
                model,
                fitted_exponent: l.slope,
                fitted_log_power: p,
                coefficient: l.intercept.exp(),
                intercept: 0.0,
                r_squared: l.r_squared,
                window,
                residual_max: l.residual_max,
            })
        }
    }
}

/// `n` log-spaced samples of `[a, b]`, endpoints included.
pub fn log_spaced(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let r = (b / a).ln();
    let mut v: Vec<f64> = (0..n).map(|i| a * (r * i as f64 / (n - 1) as f64).exp()).collect();
    v[n - 1] = b;
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_power() {
        let t = log_spaced(10.0, 1000.0, 12);
        let v: Vec<f64> = t.iter().map(|t| 3.0 * t.powf(-0.5)).collect();
        let f = fit_decay(&t, &v, FitModel::Power).unwrap();
        assert!((f.fitted_exponent + 0.5).abs() < 1e-10);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_log() {
        let t = log_spaced(10.0, 1000.0, 12);
        let v: Vec<f64> = t.iter().map(|t| 2.0 * t.ln()).collect();
        let f = fit_decay(&t, &v, FitModel::PureLog).unwrap();
        assert!((f.coefficient - 2.0).abs() < 1e-8);
        assert!(f.intercept.abs() < 1e-8);
    }

    #[test]
    fn power_times_log() {
        let t = log_spaced(100.0, 1e4, 16);
        let v: Vec<f64> = t.iter().map(|t| t.powf(0.25) * t.ln()).collect();
        let f = fit_decay(&t, &v, FitModel::PowerLog).unwrap();
        assert!((f.fitted_exponent - 0.25).abs() < 0.02);
        assert_eq!(f.fitted_log_power, 1.0);
        let v: Vec<f64> = t.iter().map(|t| t.powf(0.25)).collect();
        assert_eq!(fit_decay(&t, &v, FitModel::PowerLog).unwrap().fitted_log_power, 0.0);
    }

    #[test]
    fn refusals() {
        let t = log_spaced(10.0, 1000.0, 12);
        let mut v = vec![1.0; 12];
        v[3] = 0.0;
        assert!(fit_decay(&t, &v, FitModel::Power).is_err());
        assert!(fit_decay(&t[..7], &[1.0; 7], FitModel::Power).is_err());
        let narrow = log_spaced(10.0, 50.0, 12);
        assert!(fit_decay(&narrow, &[1.0; 12], FitModel::Power).is_err());
    }

    #[test]
    fn noisy_power() {
        // deterministic ±5% multiplicative perturbation
        let t = log_spaced(20.0, 200.0, 24);
        let v: Vec<f64> = t
            .iter()
            .enumerate()
            .map(|(i, t)| t.powf(-0.3) * (1.0 + 0.05 * ((i * 7919) % 13) as f64 / 6.0 - 0.05))
            .collect();
        let f = fit_decay(&t, &v, FitModel::Power).unwrap();
        assert!((f.fitted_exponent + 0.3).abs() < 0.05);
    }

    proptest! {
        #[test]
        fn recovers_any_power(e in -2.0f64..2.0, c in 0.1f64..10.0, a in 1.0f64..100.0) {
            let t = log_spaced(a, 30.0 * a, 10);
            let v: Vec<f64> = t.iter().map(|t| c * t.powf(e)).collect();
            let f = fit_decay(&t, &v, FitModel::Power).unwrap();
            prop_assert!((f.fitted_exponent - e).abs() < 1e-8);
        }
    }
}
