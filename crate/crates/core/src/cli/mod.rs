//! Scenario files, the batch runner and its CSV and plain-text outputs.

mod parse;
mod report;
mod run;

pub use parse::{
    parse_scenario, Defaults, Diagnostic, Experiments, Preset, ScenarioConfig, ScenarioFile, SymbolConfig,
};
pub use report::{fmt_f64, plain_report, sort_rows, verdicts_csv, ReportRow, Verdict, VERDICT_HEADER};
pub use run::{remedy, run, write_manifest, Command, RunFailure, RunOptions, RunSummary, CASE_TIMES, CASE_TOLERANCE};
