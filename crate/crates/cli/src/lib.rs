//! Runs the shutter and interrogation experiments from configuration, sweeps
//! one parameter at a time and writes JSON or CSV result records.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;
pub mod record;
pub mod sweep;
pub mod theta;

pub use config::{Experiment, ExperimentConfig, Format, GateChoice, OutputSpec, Params};
pub use error::{CliError, CliResult};
pub use experiments::{compute, run};
pub use record::{Parameters, ResultRecord};
pub use sweep::{parse_values, sweep, SweepParam, SweepValue};
pub use theta::ThetaSpec;
