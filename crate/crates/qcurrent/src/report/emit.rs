use std::fmt::Write;
use std::str::FromStr;

use serde::Serialize;

use super::{CheckResult, ConfigError, Status, Suite, SuiteConfig};

/// Schema version of the JSON report.
pub const REPORT_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Markdown,
}

impl FromStr for Format {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "md" | "markdown" => Ok(Format::Markdown),
            other => Err(ConfigError::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Serialize)]
struct Report<'a> {
    version: &'a str,
    config: &'a SuiteConfig,
    results: &'a [CheckResult],
}

pub fn emit_report(results: &[CheckResult], cfg: &SuiteConfig, format: Format) -> String {
    match format {
        Format::Json => {
            let report = Report { version: REPORT_VERSION, config: cfg, results };
            let mut s = serde_json::to_string_pretty(&report).expect("report values are always serializable");
            s.push('\n');
            s
        }
        Format::Markdown => markdown(results, cfg),
    }
}

fn cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

fn markdown(results: &[CheckResult], cfg: &SuiteConfig) -> String {
    let mut out = String::new();
    let count = |s: Status| results.iter().filter(|r| r.status == s).count();
    let _ = writeln!(out, "# Verification report\n");
    let _ = writeln!(
        out,
        "Report version {REPORT_VERSION}, seed {}, series order {}, recurrence depth {}.\n",
        cfg.seed, cfg.order, cfg.shifts
    );
    let _ = writeln!(
        out,
        "{} checks: {} pass, {} fail, {} not checked, {} order-limited.",
        results.len(),
        count(Status::Pass),
        count(Status::Fail),
        count(Status::NotChecked),
        count(Status::OrderLimited)
    );
    for suite in Suite::ALL {
        let rows: Vec<&CheckResult> = results.iter().filter(|r| r.suite() == Some(suite)).collect();
        if rows.is_empty() {
            continue;
        }
        let _ = writeln!(out, "\n## {suite}\n");
        let _ = writeln!(out, "| id | status | mode | max error | tolerance | samples | constants | runtime ms | anchor | note |");
        let _ = writeln!(out, "|---|---|---|---|---|---|---|---|---|---|");
        for r in rows {
            let tol = r.tolerance.map_or("-".to_string(), |t| format!("{t:e}"));
            let constants: Vec<String> = r.constants.iter().map(|(k, v)| format!("{k} = {v}")).collect();
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} |",
                cell(&r.id),
                r.status.name(),
                r.mode.name(),
                cell(&r.max_error.to_string()),
                tol,
                r.samples,
                cell(&constants.join("; ")),
                r.runtime_ms,
                cell(&r.anchor),
                cell(r.reason.as_deref().unwrap_or("")),
            );
        }
    }
    out
}
