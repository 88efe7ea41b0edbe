use std::fmt::Write as _;

use serde::Serialize;

use super::config::{ExperimentConfig, Format};
use super::run::{Report, ReportRow};

/// Column order of the CSV output.
pub const CSV_COLUMNS: [&str; 14] = [
    "experiment",
    "id",
    "params",
    "upper",
    "lower",
    "gap",
    "margin",
    "metric",
    "value",
    "tolerance",
    "pass",
    "warning",
    "wall_time",
    "config",
];

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("report has no rows")]
    Empty,
    #[error("serialization failed: {0}")]
    Serialize(String),
}

#[derive(Serialize)]
struct JsonReport<'a> {
    experiment: &'a str,
    id: &'a str,
    seed: u64,
    pass: bool,
    rows: &'a [ReportRow],
    config: &'a ExperimentConfig,
}

fn num(v: Option<f64>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

/// Serializes the report rows with the config echoed alongside.
pub fn emit_table(report: &Report, format: Format) -> Result<Vec<u8>, ReportError> {
    if report.rows.is_empty() {
        return Err(ReportError::Empty);
    }
    match format {
        Format::Json => {
            let doc = JsonReport {
                experiment: report.experiment.name(),
                id: &report.id,
                seed: report.seed,
                pass: report.pass,
                rows: &report.rows,
                config: &report.config,
            };
            let mut out = serde_json::to_vec_pretty(&doc)
                .map_err(|e| ReportError::Serialize(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let echo = toml::to_string(&report.config)
                .map_err(|e| ReportError::Serialize(e.to_string()))?;
            let mut w = csv::Writer::from_writer(Vec::new());
            let ser = |e: csv::Error| ReportError::Serialize(e.to_string());
            w.write_record(CSV_COLUMNS).map_err(ser)?;
            for (k, r) in report.rows.iter().enumerate() {
                w.write_record([
                    r.experiment.clone(),
                    r.id.clone(),
                    r.params.clone(),
                    num(r.upper),
                    num(r.lower),
                    num(r.gap),
                    num(r.margin),
                    r.metric.clone(),
                    num(r.value),
                    num(r.tolerance),
                    r.pass.to_string(),
                    r.warning.clone().unwrap_or_default(),
                    num(r.wall_time),
                    if k == 0 { echo.clone() } else { String::new() },
                ])
                .map_err(ser)?;
            }
            w.into_inner()
                .map_err(|e| ReportError::Serialize(e.to_string()))
        }
    }
}

/// Fixed-width summary for the terminal.
pub fn human_table(report: &Report) -> String {
    let mut s = String::new();
    let fmt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| format!("{x:.6e}"));
    let _ = writeln!(
        s,
        "{:<22} {:<16} {:>14} {:>14} {:>14} {:>10} {:>5}",
        "params", "metric", "lower", "upper", "value", "tol", "pass"
    );
    for r in &report.rows {
        let _ = writeln!(
            s,
            "{:<22} {:<16} {:>14} {:>14} {:>14} {:>10} {:>5}",
            r.params,
            r.metric,
            fmt(r.lower),
            fmt(r.upper),
            fmt(r.value),
            r.tolerance
                .map_or_else(|| "-".to_string(), |t| format!("{t:.0e}")),
            if r.pass { "ok" } else { "FAIL" }
        );
        if let Some(w) = &r.warning {
            let _ = writeln!(s, "  warning: {w}");
        }
    }
    let _ = writeln!(
        s,
        "{} [{}]: {}",
        report.experiment.name(),
        report.id,
        if report.pass { "PASS" } else { "FAIL" }
    );
    s
}
