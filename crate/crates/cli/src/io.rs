//! CSV ingestion with row-level validation, and deterministic table output.

use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::Deserialize;

use bilgamma_core::GainLossMoments;

use crate::errors::{CliError, CliResult};

/// One row of a statistical-moments dataset.
#[derive(Debug, Clone, Deserialize)]
pub struct MomentsRecord {
    pub ticker: String,
    pub date: NaiveDate,
    pub mu_p: f64,
    pub sigma_p: f64,
    pub mu_n: f64,
    pub sigma_n: f64,
}

impl MomentsRecord {
    pub fn moments(&self) -> CliResult<GainLossMoments> {
        GainLossMoments::new(self.mu_p, self.sigma_p, self.mu_n, self.sigma_n)
            .map_err(|e| CliError::Validation(e.to_string()))
    }
}

/// One row of a risk-neutral parameter dataset.
#[derive(Debug, Clone, Deserialize)]
pub struct RiskNeutralRecord {
    pub ticker: String,
    pub date: NaiveDate,
    pub maturity: f64,
    pub b_p: f64,
    pub c_p: f64,
    pub b_n: f64,
    pub c_n: f64,
    pub r: f64,
}

fn read_rows<T: for<'de> Deserialize<'de>>(
    path: &Path,
    validate: impl Fn(&T) -> Result<(), String>,
) -> CliResult<Vec<T>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| {
        CliError::Validation(format!("cannot open {}: {e}", path.display()))
    })?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?
        .clone();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record =
            record.map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let parsed: T = record.deserialize(Some(&headers)).map_err(|e| {
            CliError::Validation(format!("{} line {line}: {e}", path.display()))
        })?;
        validate(&parsed).map_err(|msg| {
            CliError::Validation(format!("{} line {line}: {msg}", path.display()))
        })?;
        rows.push(parsed);
    }
    if rows.is_empty() {
        return Err(CliError::Validation(format!(
            "{}: no data rows",
            path.display()
        )));
    }
    Ok(rows)
}

fn positive(name: &str, v: f64) -> Result<(), String> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(format!("{name} must be finite and positive, got {v}"))
    }
}

pub fn load_moments(path: &Path) -> CliResult<Vec<MomentsRecord>> {
    read_rows(path, |r: &MomentsRecord| {
        positive("mu_p", r.mu_p)?;
        positive("sigma_p", r.sigma_p)?;
        positive("mu_n", r.mu_n)?;
        positive("sigma_n", r.sigma_n)
    })
}

pub fn load_risk_neutral(path: &Path, require_b_p_below_one: bool) -> CliResult<Vec<RiskNeutralRecord>> {
    read_rows(path, |r: &RiskNeutralRecord| {
        positive("maturity", r.maturity)?;
        positive("b_p", r.b_p)?;
        positive("c_p", r.c_p)?;
        positive("b_n", r.b_n)?;
        positive("c_n", r.c_n)?;
        if !r.r.is_finite() {
            return Err(format!("r must be finite, got {}", r.r));
        }
        if require_b_p_below_one && r.b_p >= 1.0 {
            return Err(format!("b_p must be below 1 for valuation, got {}", r.b_p));
        }
        Ok(())
    })
}

/// Formats a float with 17 significant digits, round-trippable through
/// `str::parse::<f64>()`.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV table accumulated in memory and emitted to stdout or a file,
/// byte-identical across runs with identical inputs.
pub struct Table {
    lines: Vec<String>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            lines: vec![header.join(",")],
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.lines.push(cells.join(","));
    }

    pub fn emit(self, out: Option<&PathBuf>) -> CliResult<()> {
        let body = self.lines.join("\n") + "\n";
        match out {
            Some(path) => std::fs::write(path, body).map_err(|e| {
                CliError::Validation(format!("cannot write {}: {e}", path.display()))
            }),
            None => {
                use std::io::Write;
                std::io::stdout()
                    .write_all(body.as_bytes())
                    .map_err(|e| CliError::Validation(format!("stdout: {e}")))
            }
        }
    }
}
