//! Batch experiment runner for `tfpdo`: declarative TOML configs in,
//! versioned JSON reports and CSV envelopes out.

pub mod config;
pub mod error;
pub mod experiments;
pub mod report;
pub mod runner;

pub use config::{load, Experiment, ExperimentConfig, Kind};
pub use error::CliError;
pub use runner::{run_experiment, run_path, sweep, validate, Outcome};
