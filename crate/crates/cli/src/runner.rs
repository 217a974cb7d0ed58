//! `run`, `sweep` and `validate`.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{self, Experiment, WeightKind};
use crate::error::{CliError, EXIT_ASSERTION, EXIT_OK};
use crate::experiments;
use crate::report::{write_report, Recorder, Report, Status, SCHEMA_VERSION};

/// Result of running one experiment.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: u8,
}

/// Runs a validated experiment in memory, without writing files.
pub fn execute(e: &Experiment) -> Result<(Report, Recorder), CliError> {
    let mut rec = Recorder::default();
    experiments::run(e, &mut rec)?;
    rec.summary.max_residual = rec.max_residual();
    let report = Report {
        schema_version: SCHEMA_VERSION,
        name: e.name.clone(),
        kind: e.kind,
        seed: e.seed,
        group: e.group.moduli().to_vec(),
        status: rec.status(),
        assertions: rec.assertions.clone(),
        notices: rec.notices.clone(),
        summary: rec.summary.clone(),
        metrics: std::mem::take(&mut rec.metrics),
    };
    Ok((report, rec))
}

/// Runs an experiment and writes `report.json`, `envelopes.csv` and any
/// configured CSV exports.
pub fn run_experiment(e: &Experiment) -> Result<Outcome, CliError> {
    let (report, rec) = execute(e)?;
    write_report(&e.output_dir, &report, &rec.envelopes)?;
    if let (Some(path), Some(sigma)) = (&e.symbol_csv, e.symbols.first()) {
        tfpdo::io::save_symbol(sigma, path).map_err(|err| CliError::Io(err.to_string()))?;
    }
    let exit_code = if report.status == Status::Fail { EXIT_ASSERTION } else { EXIT_OK };
    Ok(Outcome { report, exit_code })
}

pub fn run_path(path: &Path) -> Result<Outcome, CliError> {
    run_experiment(&config::load(path)?)
}

/// One row of the sweep CSV.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub config: String,
    pub kind: String,
    pub group: String,
    pub status: String,
    pub weight: String,
    pub weight_s: Option<f64>,
    pub weight_a: Option<f64>,
    pub weight_b: Option<f64>,
    pub redundancy: Option<f64>,
    pub frame_lower: Option<f64>,
    pub frame_upper: Option<f64>,
    pub is_frame: Option<bool>,
    pub symbols: Option<usize>,
    pub sigma_norm: Option<f64>,
    pub tau_norm: Option<f64>,
    pub sigma_cv_norm: Option<f64>,
    pub tau_cv_norm: Option<f64>,
    pub sigma_decay_rate: Option<f64>,
    pub tau_decay_rate: Option<f64>,
    pub equivalence_low: Option<f64>,
    pub equivalence_high: Option<f64>,
    pub max_residual: Option<f64>,
    pub error: String,
}

pub const SWEEP_HEADER: [&str; 23] = [
    "config",
    "kind",
    "group",
    "status",
    "weight",
    "weight_s",
    "weight_a",
    "weight_b",
    "redundancy",
    "frame_lower",
    "frame_upper",
    "is_frame",
    "symbols",
    "sigma_norm",
    "tau_norm",
    "sigma_cv_norm",
    "tau_cv_norm",
    "sigma_decay_rate",
    "tau_decay_rate",
    "equivalence_low",
    "equivalence_high",
    "max_residual",
    "error",
];

fn row(e: &Experiment, result: &Result<Outcome, CliError>) -> SweepRow {
    let group: Vec<String> = e.group.moduli().iter().map(|n| n.to_string()).collect();
    let mut row = SweepRow {
        config: e.name.clone(),
        kind: e.kind.name().to_string(),
        group: group.join("x"),
        status: String::new(),
        weight: match e.weight_spec.kind {
            WeightKind::Polynomial => "polynomial".into(),
            WeightKind::Subexponential => "subexponential".into(),
        },
        weight_s: e.weight_spec.s,
        weight_a: e.weight_spec.a,
        weight_b: e.weight_spec.b,
        redundancy: None,
        frame_lower: None,
        frame_upper: None,
        is_frame: None,
        symbols: None,
        sigma_norm: None,
        tau_norm: None,
        sigma_cv_norm: None,
        tau_cv_norm: None,
        sigma_decay_rate: None,
        tau_decay_rate: None,
        equivalence_low: None,
        equivalence_high: None,
        max_residual: None,
        error: String::new(),
    };
    match result {
        Ok(outcome) => {
            let s = &outcome.report.summary;
            row.status = match outcome.report.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::ExpectedNegative => "expected-negative",
            }
            .into();
            row.redundancy = s.redundancy;
            row.frame_lower = s.frame_lower;
            row.frame_upper = s.frame_upper;
            row.is_frame = s.is_frame;
            row.symbols = Some(s.symbols);
            row.sigma_norm = s.sigma_norm;
            row.tau_norm = s.tau_norm;
            row.sigma_cv_norm = s.sigma_cv_norm;
            row.tau_cv_norm = s.tau_cv_norm;
            row.sigma_decay_rate = s.sigma_decay_rate;
            row.tau_decay_rate = s.tau_decay_rate;
            row.equivalence_low = s.equivalence_low;
            row.equivalence_high = s.equivalence_high;
            row.max_residual = s.max_residual;
        }
        Err(err) => {
            row.status = "error".into();
            row.error = err.to_string();
        }
    }
    row
}

/// Config files of a sweep directory: every `*.toml`, sorted by name.
pub fn sweep_configs(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::Config(format!("{}: {e}", dir.display())))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry?.path();
        if path.is_file() && path.extension().is_some_and(|x| x == "toml") {
            paths.push(path);
        }
    }
    paths.sort();
    Ok(paths)
}

/// Loads and checks a sweep: all configs valid, one kind, distinct outputs.
pub fn load_sweep(paths: &[PathBuf]) -> Result<Vec<Experiment>, CliError> {
    let experiments = paths.iter().map(|p| config::load(p)).collect::<Result<Vec<_>, _>>()?;
    if let Some(first) = experiments.first() {
        if let Some(other) = experiments.iter().find(|e| e.kind != first.kind) {
            return Err(CliError::Config(format!(
                "sweep mixes experiment kinds: {} is {}, {} is {}",
                first.name,
                first.kind.name(),
                other.name,
                other.kind.name()
            )));
        }
    }
    let mut seen = HashSet::new();
    for e in &experiments {
        if !seen.insert(e.output_dir.clone()) {
            return Err(CliError::Config(format!(
                "two configs write to the same output directory {}",
                e.output_dir.display()
            )));
        }
    }
    Ok(experiments)
}

/// Runs every config of a sweep (in parallel) and writes one CSV row per
/// config, in file-name order. Returns the worst exit status.
pub fn sweep(dir: &Path, csv_path: &Path) -> Result<u8, CliError> {
    let experiments = load_sweep(&sweep_configs(dir)?)?;
    let results: Vec<Result<Outcome, CliError>> = experiments.par_iter().map(run_experiment).collect();
    let mut out = csv::Writer::from_path(csv_path)?;
    if experiments.is_empty() {
        out.write_record(SWEEP_HEADER)?;
    }
    let mut worst = EXIT_OK;
    for (e, result) in experiments.iter().zip(&results) {
        out.serialize(row(e, result))?;
        let code = match result {
            Ok(outcome) => outcome.exit_code,
            Err(err) => {
                eprintln!("{}: {err}", e.name);
                err.exit_code()
            }
        };
        worst = worst.max(code);
    }
    out.flush()?;
    Ok(worst)
}

/// Checks a config without running it and describes what it would do.
pub fn validate(path: &Path) -> Result<String, CliError> {
    let e = config::load(path)?;
    let mut lines = vec![
        format!("kind: {}", e.kind.name()),
        format!("group: {:?} (order {})", e.group.moduli(), e.group.order()),
        format!("symbols: {}", e.symbols.len()),
        format!("output: {}", e.output_dir.display()),
    ];
    if let Some(lattice) = &e.lattice {
        lines.push(format!("lattice: {} points, redundancy {}", lattice.len(), lattice.redundancy()));
    }
    if e.window.is_some() {
        lines.push(format!("window: tight = {}", e.tight));
    }
    Ok(lines.join("\n"))
}
