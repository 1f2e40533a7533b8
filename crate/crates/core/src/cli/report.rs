use std::cmp::Ordering;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Pass,
    Fail,
    /// Informational rows such as sharpness probes; never counted as a failure.
    Reported,
}

impl Verdict {
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Reported => "reported",
        }
    }

    pub fn hard(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// One verdict line.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub experiment: String,
    pub label: String,
    pub quantity: String,
    pub predicted_exponent: f64,
    pub predicted_log_power: u32,
    pub measured_exponent: f64,
    pub r_squared: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    /// Free text for the plain report only.
    pub note: Option<String>,
}

impl ReportRow {
    fn key(&self) -> (&str, &str, &str) {
        (&self.experiment, &self.label, &self.quantity)
    }
}

pub fn sort_rows(rows: &mut [ReportRow]) {
    rows.sort_by(|a, b| a.key().cmp(&b.key()));
}

/// Seventeen significant digits.
pub fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else if v.is_nan() {
        "nan".into()
    } else {
        format!("{v:.16e}")
    }
}

pub const VERDICT_HEADER: &str =
    "experiment,label,quantity,predicted_exponent,predicted_log_power,measured_exponent,r_squared,tolerance,verdict";

pub fn verdicts_csv(rows: &[ReportRow]) -> String {
    let mut out = String::from(VERDICT_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.experiment,
            r.label,
            r.quantity,
            fmt_f64(r.predicted_exponent),
            r.predicted_log_power,
            fmt_f64(r.measured_exponent),
            fmt_f64(r.r_squared),
            fmt_f64(r.tolerance),
            r.verdict.tag()
        );
    }
    out
}

/// Plain-text table of the verdict rows with a pass/fail tally.
pub fn plain_report(title: &str, sections: &[String], rows: &[ReportRow]) -> String {
    let mut out = format!("{title}\n\n");
    for s in sections {
        out.push_str(s);
        if !s.ends_with('\n') {
            out.push('\n');
        }
        out.push('\n');
    }
    if rows.is_empty() {
        out.push_str("no verdict rows\n");
    }
    for r in rows {
        let _ = write!(
            out,
            "{:<8} {:<20} {:<24} {:<26} predicted {:>9.4}{} measured {:>9.4} r2 {:>6.4} tol {:.3}",
            r.verdict.tag(),
            r.experiment,
            r.label,
            r.quantity,
            r.predicted_exponent,
            if r.predicted_log_power > 0 { format!(" +log^{}", r.predicted_log_power) } else { String::new() },
            r.measured_exponent,
            r.r_squared,
            r.tolerance
        );
        if let Some(n) = &r.note {
            let _ = write!(out, "  [{n}]");
        }
        out.push('\n');
    }
    let count = |v: Verdict| rows.iter().filter(|r| r.verdict == v).count();
    let _ = writeln!(
        out,
        "\n{} pass, {} fail, {} reported",
        count(Verdict::Pass),
        count(Verdict::Fail),
        count(Verdict::Reported)
    );
    out
}

/// Sorts CSV body lines (the header stays first) so output order never depends on scheduling.
pub fn write_csv(path: &Path, header: &str, mut lines: Vec<(Vec<SortKey>, String)>) -> Result<()> {
    lines.sort_by(|a, b| cmp_keys(&a.0, &b.0));
    let mut out = String::with_capacity(64 * (lines.len() + 1));
    out.push_str(header);
    out.push('\n');
    for (_, l) in lines {
        out.push_str(&l);
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub enum SortKey {
    Text(String),
    Num(f64),
}

fn cmp_keys(a: &[SortKey], b: &[SortKey]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = match (x, y) {
            (SortKey::Text(p), SortKey::Text(q)) => p.cmp(q),
            (SortKey::Num(p), SortKey::Num(q)) => p.total_cmp(q),
            (SortKey::Text(_), SortKey::Num(_)) => Ordering::Less,
            (SortKey::Num(_), SortKey::Text(_)) => Ordering::Greater,
        };
        if o != Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
        let back: f64 = fmt_f64(std::f64::consts::PI).parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }

    #[test]
    fn rows_sort_by_experiment_label_quantity() {
        let row = |e: &str, l: &str, q: &str| ReportRow {
            experiment: e.into(),
            label: l.into(),
            quantity: q.into(),
            predicted_exponent: 0.0,
            predicted_log_power: 0,
            measured_exponent: 0.0,
            r_squared: 1.0,
            tolerance: 0.1,
            verdict: Verdict::Pass,
            note: None,
        };
        let mut rows = vec![row("b", "x", "1"), row("a", "y", "2"), row("a", "x", "3")];
        sort_rows(&mut rows);
        let keys: Vec<_> = rows.iter().map(|r| (r.experiment.as_str(), r.label.as_str())).collect();
        assert_eq!(keys, vec![("a", "x"), ("a", "y"), ("b", "x")]);
        assert!(verdicts_csv(&rows).starts_with(VERDICT_HEADER));
    }
}
