//! Result rows keyed by (scheme label, metric, SNR) and their CSV form.
//!
//! The CSV layout is the stable interchange format: fixed header, floats
//! in `{:.8e}` scientific notation, rows in canonical sort order. Writing
//! a parsed table again reproduces the input byte for byte.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Result, SimError};

pub const CSV_HEADER: &str =
    "snr_db,scheme_label,metric,value,ci_low,ci_high,trials,resampled_trials";

/// One reported quantity. Variant order is the canonical metric order
/// within a scheme: network outage, per-user outage, then sum rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Metric {
    NetworkOutage,
    UserOutage(usize),
    AvgSumRate,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::NetworkOutage => write!(f, "network_op"),
            Metric::UserOutage(k) => write!(f, "user_op[{k}]"),
            Metric::AvgSumRate => write!(f, "avg_sum_rate"),
        }
    }
}

impl FromStr for Metric {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "network_op" => return Ok(Metric::NetworkOutage),
            "avg_sum_rate" => return Ok(Metric::AvgSumRate),
            _ => {}
        }
        if let Some(idx) = s.strip_prefix("user_op[").and_then(|r| r.strip_suffix(']')) {
            if let Ok(k) = idx.parse::<usize>() {
                return Ok(Metric::UserOutage(k));
            }
        }
        Err(SimError::Table(format!("unknown metric `{s}`")))
    }
}

/// One estimate at one grid point for one labeled scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub snr_db: f64,
    pub scheme_label: String,
    pub metric: Metric,
    pub value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: u64,
    pub resampled_trials: u64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

fn fmt_float(x: f64) -> String {
    format!("{x:.8e}")
}

impl ResultTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, row: ResultRow) {
        self.rows.push(row);
    }

    pub fn extend_from(&mut self, other: ResultTable) {
        self.rows.extend(other.rows);
    }

    /// Sort by (scheme label, metric, SNR); the order every emitted CSV uses.
    pub fn sort_canonical(&mut self) {
        self.rows.sort_by(|a, b| {
            a.scheme_label
                .cmp(&b.scheme_label)
                .then_with(|| a.metric.cmp(&b.metric))
                .then_with(|| a.snr_db.total_cmp(&b.snr_db))
        });
    }

    /// Look up one row; SNR matches to 1e-9 dB.
    pub fn find(&self, scheme_label: &str, metric: Metric, snr_db: f64) -> Option<&ResultRow> {
        self.rows.iter().find(|r| {
            r.scheme_label == scheme_label
                && r.metric == metric
                && (r.snr_db - snr_db).abs() < 1e-9
        })
    }

    pub fn scheme_labels(&self) -> Vec<String> {
        let mut labels: Vec<String> =
            self.rows.iter().map(|r| r.scheme_label.clone()).collect();
        labels.sort();
        labels.dedup();
        labels
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                fmt_float(r.snr_db),
                r.scheme_label,
                r.metric,
                fmt_float(r.value),
                fmt_float(r.ci_low),
                fmt_float(r.ci_high),
                r.trials,
                r.resampled_trials,
            ));
        }
        out
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h == CSV_HEADER => {}
            other => {
                return Err(SimError::Table(format!(
                    "bad header: expected `{CSV_HEADER}`, got `{}`",
                    other.unwrap_or("<empty>")
                )))
            }
        }
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let lineno = i + 2;
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 8 {
                return Err(SimError::Table(format!(
                    "line {lineno}: expected 8 fields, got {}",
                    fields.len()
                )));
            }
            let float = |idx: usize, name: &str| -> Result<f64> {
                fields[idx].parse().map_err(|_| {
                    SimError::Table(format!("line {lineno}: bad {name} `{}`", fields[idx]))
                })
            };
            let int = |idx: usize, name: &str| -> Result<u64> {
                fields[idx].parse().map_err(|_| {
                    SimError::Table(format!("line {lineno}: bad {name} `{}`", fields[idx]))
                })
            };
            rows.push(ResultRow {
                snr_db: float(0, "snr_db")?,
                scheme_label: fields[1].to_string(),
                metric: fields[2]
                    .parse()
                    .map_err(|e| SimError::Table(format!("line {lineno}: {e}")))?,
                value: float(3, "value")?,
                ci_low: float(4, "ci_low")?,
                ci_high: float(5, "ci_high")?,
                trials: int(6, "trials")?,
                resampled_trials: int(7, "resampled_trials")?,
            });
        }
        Ok(ResultTable { rows })
    }

    pub fn emit_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string())?;
        Ok(())
    }

    pub fn parse_csv(path: &Path) -> Result<Self> {
        Self::from_csv_str(&std::fs::read_to_string(path)?)
    }
}
