//! Serializable result records.

use std::collections::BTreeMap;

use qshutter_core::{Operator, PureState};
use serde::{Deserialize, Serialize};

use crate::config::{Experiment, GateChoice};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Parameters after defaults and symbolic angles have been resolved.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    /// The angle as written, e.g. `pi/(N+1)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_spec: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycles: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bomb: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub particle: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<[f64; 2]>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gate: Option<GateChoice>,
}

impl Parameters {
    /// Numeric parameters as CSV columns, in a fixed order.
    pub fn columns(&self) -> Vec<(&'static str, f64)> {
        let mut out = Vec::new();
        if let Some(t) = self.theta {
            out.push(("theta", t));
        }
        if let Some(n) = self.cycles {
            out.push(("cycles", n as f64));
        }
        out.push(("seed", self.seed as f64));
        if let Some(n) = self.trials {
            out.push(("trials", n as f64));
        }
        out
    }
}

/// Row-major complex matrix with its basis labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub name: String,
    pub basis: Vec<String>,
    /// `(re, im)` pairs, row-major.
    pub data: Vec<[f64; 2]>,
}

impl MatrixRecord {
    pub fn from_operator(name: &str, op: &Operator) -> Self {
        MatrixRecord {
            name: name.into(),
            basis: (0..op.dim()).map(|k| op.basis().label_string(k)).collect(),
            data: op.data().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub name: String,
    pub basis: Vec<String>,
    pub amplitudes: Vec<[f64; 2]>,
    /// Probability of the branch this state belongs to.
    pub weight: f64,
}

impl StateRecord {
    pub fn from_state(name: &str, s: &PureState) -> Self {
        StateRecord {
            name: name.into(),
            basis: (0..s.dim()).map(|k| s.basis().label_string(k)).collect(),
            amplitudes: s.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
            weight: s.weight(),
        }
    }
}

/// One row of a branch table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchRow {
    pub labels: BTreeMap<String, String>,
    pub probability: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fidelity: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Outputs {
    pub scalars: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub matrices: Vec<MatrixRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub states: Vec<StateRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub branches: Vec<BranchRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub experiment: Experiment,
    pub tool_version: String,
    pub parameters: Parameters,
    pub outputs: Outputs,
    /// Wall-clock time of the computation. Not part of the numeric payload.
    pub duration_seconds: f64,
}

impl ResultRecord {
    /// Copy with the timing removed, for determinism comparisons.
    pub fn payload(&self) -> ResultRecord {
        ResultRecord { duration_seconds: 0.0, ..self.clone() }
    }
}
