use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{CliError, CliResult};

/// An angle as given on the command line. The symbolic forms are resolved
/// against the cycle count of the run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ThetaSpec {
    Radians(f64),
    /// `pi/<x>`
    PiOver(f64),
    /// `pi/(2N)`
    PiOverTwiceCycles,
    /// `pi/(N+1)`
    PiOverCyclesPlusOne,
}

impl ThetaSpec {
    pub fn resolve(self, cycles: u32) -> f64 {
        match self {
            ThetaSpec::Radians(t) => t,
            ThetaSpec::PiOver(x) => PI / x,
            ThetaSpec::PiOverTwiceCycles => PI / (2.0 * cycles as f64),
            ThetaSpec::PiOverCyclesPlusOne => PI / (cycles as f64 + 1.0),
        }
    }
}

impl FromStr for ThetaSpec {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
        let t = t.replace('π', "pi");
        let bad = || CliError::usage("theta", format!("cannot parse {s:?}"));
        let spec = match t.as_str() {
            "pi/(2n)" | "pi/2n" => ThetaSpec::PiOverTwiceCycles,
            "pi/(n+1)" => ThetaSpec::PiOverCyclesPlusOne,
            "pi" => ThetaSpec::PiOver(1.0),
            _ => match t.strip_prefix("pi/") {
                Some(rest) => ThetaSpec::PiOver(rest.trim_matches(|c| c == '(' || c == ')').parse().map_err(|_| bad())?),
                None => ThetaSpec::Radians(t.parse().map_err(|_| bad())?),
            },
        };
        let probe = spec.resolve(1);
        if !probe.is_finite() || probe <= 0.0 {
            return Err(CliError::usage("theta", format!("{s:?} is not a positive finite angle")));
        }
        Ok(spec)
    }
}

impl fmt::Display for ThetaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaSpec::Radians(t) => write!(f, "{t:?}"),
            ThetaSpec::PiOver(x) => write!(f, "pi/{x:?}"),
            ThetaSpec::PiOverTwiceCycles => f.write_str("pi/(2N)"),
            ThetaSpec::PiOverCyclesPlusOne => f.write_str("pi/(N+1)"),
        }
    }
}
