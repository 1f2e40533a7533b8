use super::integral::{leading_term, oracle_integral, Amplitude, LeadingCase, OscIntegralSpec, Weight};
use crate::dispersion::DispersionRelation;
use crate::error::Result;

/// A fixed phase, amplitude and weight satisfying one case's hypotheses; only `t` varies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceCase {
    pub label: &'static str,
    pub case: LeadingCase,
    pub phase: [f64; 3],
    pub weight: Weight,
    pub lower_limit: f64,
}

const CHI: Amplitude = Amplitude::Bump { center: 0.0, radius: 1.0 };

impl ReferenceCase {
    pub fn spec(&self, t: f64) -> OscIntegralSpec {
        OscIntegralSpec {
            phase: DispersionRelation::new(&self.phase).expect("reference phase is valid"),
            amplitude: CHI,
            weight: self.weight,
            t,
            lower_limit: self.lower_limit,
        }
    }

    /// Oracle value, leading term and their distance at time `t`.
    pub fn compare(&self, t: f64) -> Result<ReferenceRow> {
        let spec = self.spec(t);
        let oracle = oracle_integral(&spec)?;
        let lead = leading_term(&spec, self.case)?;
        Ok(ReferenceRow {
            t,
            oracle: oracle.value,
            oracle_error: oracle.error_estimate,
            leading: lead.value,
            remainder: (oracle.value - lead.value).norm(),
            claimed_order: lead.claimed_error_order,
            inner_branch: lead.inner_branch,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceRow {
    pub t: f64,
    pub oracle: num_complex::Complex64,
    pub oracle_error: f64,
    pub leading: num_complex::Complex64,
    pub remainder: f64,
    pub claimed_order: f64,
    pub inner_branch: Option<bool>,
}

/// One configuration per case; the split cases appear once on each side of their switch
/// for `t ∈ [10², 10⁴]`.
pub fn reference_cases() -> Vec<ReferenceCase> {
    use LeadingCase::*;
    let case = |label, case, phase, weight, lower_limit| ReferenceCase { label, case, phase, weight, lower_limit };
    vec![
        case("B2_i", B2i, [0.09, -0.6, 1.0], Weight::None, 0.0),
        case("B2_ii", B2ii, [1.0, 1.0, 0.0], Weight::InvSqrtSigma, 0.0),
        case("B2_iii", B2iii, [0.25, -1.0, 1.0], Weight::InvSqrtSigma, 0.0),
        case("B2_iv_outer", B2iv, [0.09, -0.6, 1.0], Weight::InvSqrtSigma, 0.0),
        case("B2_iv_inner", B2iv, [9e-6, -0.006, 1.0], Weight::InvSqrtSigma, 0.0),
        case("B3_i", B3i, [0.0, 0.0, 1.0], Weight::None, 0.2),
        case("B3_ii", B3ii, [0.0, 1.0, 0.0], Weight::InvSqrtSigma, 0.0),
        case("B3_iii_outer", B3iii, [0.0, 0.0, 1.0], Weight::InvSqrtSigmaMinusEps(0.2), 0.2),
        case("B3_iii_inner", B3iii, [0.0, 0.0, 1.0], Weight::InvSqrtSigmaMinusEps(0.005), 0.005),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_case_satisfies_its_hypotheses() {
        for rc in reference_cases() {
            let row = rc.compare(100.0).unwrap();
            assert!(row.remainder.is_finite(), "{}", rc.label);
        }
    }

    #[test]
    fn split_cases_stay_on_one_side() {
        for rc in reference_cases().into_iter().filter(|r| r.label.ends_with("inner") || r.label.ends_with("outer")) {
            let want = rc.label.ends_with("inner");
            for t in [1e2, 1e3, 1e4] {
                assert_eq!(rc.compare(t).unwrap().inner_branch, Some(want), "{} t={t}", rc.label);
            }
        }
    }
}
