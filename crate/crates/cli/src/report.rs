//! Report assembly and output files.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::config::Kind;
use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    ExpectedNegative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Comparison {
    #[serde(rename = "<")]
    Below,
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">")]
    Above,
}

impl Comparison {
    pub fn symbol(self) -> &'static str {
        match self {
            Comparison::Below => "<",
            Comparison::AtMost => "<=",
            Comparison::Above => ">",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Assertion {
    pub name: String,
    pub value: f64,
    pub comparison: Comparison,
    pub tolerance: f64,
    pub passed: bool,
    /// A failure that the configuration predicts; it does not fail the run.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub expected_negative: bool,
}

/// Scalar results shared by all kinds; these become the sweep columns.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Summary {
    pub redundancy: Option<f64>,
    pub frame_lower: Option<f64>,
    pub frame_upper: Option<f64>,
    pub is_frame: Option<bool>,
    pub symbols: usize,
    pub sigma_norm: Option<f64>,
    pub tau_norm: Option<f64>,
    pub sigma_cv_norm: Option<f64>,
    pub tau_cv_norm: Option<f64>,
    pub sigma_decay_rate: Option<f64>,
    pub tau_decay_rate: Option<f64>,
    pub equivalence_low: Option<f64>,
    pub equivalence_high: Option<f64>,
    pub max_residual: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub name: String,
    pub kind: Kind,
    pub seed: u64,
    pub group: Vec<usize>,
    pub status: Status,
    pub assertions: Vec<Assertion>,
    pub notices: Vec<String>,
    pub summary: Summary,
    pub metrics: BTreeMap<String, Value>,
}

/// One row of `envelopes.csv`.
#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeRow {
    pub series: String,
    pub symbol: usize,
    pub k: usize,
    pub distance: usize,
    pub value: f64,
    pub weight: f64,
}

/// Collects assertions, metrics and envelope rows while an experiment runs.
#[derive(Debug, Default)]
pub struct Recorder {
    pub assertions: Vec<Assertion>,
    pub notices: Vec<String>,
    pub metrics: BTreeMap<String, Value>,
    pub envelopes: Vec<EnvelopeRow>,
    pub summary: Summary,
}

impl Recorder {
    fn push(&mut self, name: &str, value: f64, comparison: Comparison, tolerance: f64, expected_negative: bool) -> bool {
        let passed = value.is_finite()
            && match comparison {
                Comparison::Below => value < tolerance,
                Comparison::AtMost => value <= tolerance,
                Comparison::Above => value > tolerance,
            };
        self.assertions.push(Assertion {
            name: name.to_string(),
            value,
            comparison,
            tolerance,
            passed,
            expected_negative: expected_negative && !passed,
        });
        passed
    }

    /// Hard assertion `value < tolerance`.
    pub fn below(&mut self, name: &str, value: f64, tolerance: f64) -> bool {
        self.push(name, value, Comparison::Below, tolerance, false)
    }

    /// Hard assertion that a count is zero.
    pub fn none(&mut self, name: &str, count: usize) -> bool {
        self.push(name, count as f64, Comparison::AtMost, 0.0, false)
    }

    /// Hard assertion `value > threshold`.
    pub fn above(&mut self, name: &str, value: f64, threshold: f64) -> bool {
        self.push(name, value, Comparison::Above, threshold, false)
    }

    /// `value > threshold`, where failure is the predicted outcome.
    pub fn above_or_expected(&mut self, name: &str, value: f64, threshold: f64) -> bool {
        self.push(name, value, Comparison::Above, threshold, true)
    }

    pub fn metric(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("metrics are plain data");
        self.metrics.insert(key.to_string(), value);
    }

    pub fn notice(&mut self, text: impl Into<String>) {
        self.notices.push(text.into());
    }

    pub fn status(&self) -> Status {
        if self.assertions.iter().any(|a| !a.passed && !a.expected_negative) {
            Status::Fail
        } else if self.assertions.iter().any(|a| a.expected_negative) {
            Status::ExpectedNegative
        } else {
            Status::Pass
        }
    }

    pub fn max_residual(&self) -> Option<f64> {
        self.assertions
            .iter()
            .filter(|a| a.comparison == Comparison::Below)
            .map(|a| a.value)
            .reduce(f64::max)
    }
}

pub fn write_report(dir: &Path, report: &Report, envelopes: &[EnvelopeRow]) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    let mut json = serde_json::to_string_pretty(report).map_err(|e| CliError::Io(e.to_string()))?;
    json.push('\n');
    std::fs::write(dir.join("report.json"), json)?;
    let mut out = csv::Writer::from_path(dir.join("envelopes.csv"))?;
    if envelopes.is_empty() {
        out.write_record(["series", "symbol", "k", "distance", "value", "weight"])?;
    }
    for row in envelopes {
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_follows_assertions() {
        let mut r = Recorder::default();
        assert!(r.below("a", 1e-12, 1e-10));
        assert!(r.none("b", 0));
        assert_eq!(r.status(), Status::Pass);
        assert!(!r.above_or_expected("frame", 0.0, 1e-10));
        assert_eq!(r.status(), Status::ExpectedNegative);
        assert!(!r.below("c", f64::NAN, 1.0));
        assert_eq!(r.status(), Status::Fail);
        assert_eq!(r.max_residual(), Some(1e-12));
    }
}
