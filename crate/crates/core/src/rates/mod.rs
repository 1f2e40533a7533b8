//! Rate tables, exponent fitting, verdicts and ε-scaling experiments.

mod fit;
mod scaling;
mod table;
mod verdict;

pub use fit::{fit_decay, log_spaced, FitModel, FitResult};
pub use scaling::{
    lemma_exponent, multiplier_scaling_experiment, ScalingFamily, ScalingResult, SCALING_TOLERANCE,
};
pub use table::{expected_rate, DecayLaw, Regime, PROP41_NOTE};
pub use verdict::{
    lower_bound_probe, run_rate_scenario, strichartz_integrated, upper_verdict, BoundSide,
    RateVerdict, LOWER_TOLERANCE, RATE_TOLERANCE,
};
