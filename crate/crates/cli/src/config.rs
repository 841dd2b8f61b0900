//! Experiment selection and parameter validation.

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::theta::ThetaSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Interrogate,
    ShutterEvolve,
    ShutterConverge,
    MemoryRoundtrip,
    Cnot,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Interrogate => "interrogate",
            Experiment::ShutterEvolve => "shutter-evolve",
            Experiment::ShutterConverge => "shutter-converge",
            Experiment::MemoryRoundtrip => "memory-roundtrip",
            Experiment::Cnot => "cnot",
        }
    }

    /// Parameters this experiment accepts.
    pub fn schema(self) -> &'static [Field] {
        use Field::*;
        match self {
            Experiment::Interrogate => &[Theta, Cycles, Bomb],
            Experiment::ShutterEvolve => &[Theta, Cycles, Particle, Input],
            Experiment::ShutterConverge => &[Theta, Cycles],
            Experiment::MemoryRoundtrip => &[Theta, Cycles, Amplitudes, Seed, Trials, Gate],
            Experiment::Cnot => &[Seed, Trials],
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Theta,
    Cycles,
    Bomb,
    Particle,
    Input,
    Amplitudes,
    Seed,
    Trials,
    Gate,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::Theta => "theta",
            Field::Cycles => "cycles",
            Field::Bomb => "bomb",
            Field::Particle => "particle",
            Field::Input => "input",
            Field::Amplitudes => "alpha/beta",
            Field::Seed => "seed",
            Field::Trials => "trials",
            Field::Gate => "gate",
        }
    }
}

/// Which shutter gate the protocols run on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum GateChoice {
    #[default]
    Ideal,
    /// Finite-cycle gate built from the nested devices (needs `cycles`).
    Realized,
}

/// Raw parameters as supplied; `None` / `false` means "not given".
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params {
    pub theta: Option<ThetaSpec>,
    pub cycles: Option<u32>,
    pub bomb: bool,
    pub particle: bool,
    pub input: Option<String>,
    pub alpha: Option<(f64, f64)>,
    pub beta: Option<(f64, f64)>,
    pub seed: Option<u64>,
    pub trials: Option<u32>,
    pub gate: Option<GateChoice>,
}

impl Params {
    fn given(&self) -> Vec<Field> {
        let mut out = Vec::new();
        let mut push = |cond: bool, f: Field| {
            if cond {
                out.push(f)
            }
        };
        push(self.theta.is_some(), Field::Theta);
        push(self.cycles.is_some(), Field::Cycles);
        push(self.bomb, Field::Bomb);
        push(self.particle, Field::Particle);
        push(self.input.is_some(), Field::Input);
        push(self.alpha.is_some() || self.beta.is_some(), Field::Amplitudes);
        push(self.seed.is_some(), Field::Seed);
        push(self.trials.is_some(), Field::Trials);
        push(self.gate.is_some(), Field::Gate);
        out
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputSpec {
    /// `None` writes to stdout.
    pub path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub params: Params,
    pub output: OutputSpec,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment, params: Params) -> Self {
        ExperimentConfig { experiment, params, output: OutputSpec { path: None, format: Format::Json } }
    }

    /// Reject parameters outside the experiment's schema and values that are
    /// out of range, before anything is computed.
    pub fn validate(&self) -> CliResult<()> {
        let schema = self.experiment.schema();
        if let Some(extra) = self.params.given().into_iter().find(|f| !schema.contains(f)) {
            return Err(CliError::usage(
                extra.name(),
                format!("not a parameter of `{}`", self.experiment),
            ));
        }
        let p = &self.params;
        if p.cycles == Some(0) {
            return Err(CliError::usage("cycles", "must be at least 1"));
        }
        if p.trials == Some(0) {
            return Err(CliError::usage("trials", "must be at least 1"));
        }
        if p.alpha.is_some() != p.beta.is_some() {
            return Err(CliError::usage("alpha/beta", "give both amplitudes or neither"));
        }
        if let (Some(a), Some(b)) = (p.alpha, p.beta) {
            let n = a.0 * a.0 + a.1 * a.1 + b.0 * b.0 + b.1 * b.1;
            if !n.is_finite() || n == 0.0 {
                return Err(CliError::usage("alpha/beta", "amplitudes must be finite and not both zero"));
            }
        }
        if p.gate == Some(GateChoice::Realized) && p.cycles.is_none() {
            return Err(CliError::usage("cycles", "the realized gate needs a cycle count"));
        }
        if let Some(input) = &p.input {
            if !["H1", "V1", "H2", "V2"].contains(&input.as_str()) {
                return Err(CliError::usage("input", format!("{input:?} is not one of H1, V1, H2, V2")));
            }
        }
        Ok(())
    }
}
