//! One-parameter sweeps.

use std::fmt;
use std::str::FromStr;

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::experiments::compute;
use crate::record::ResultRecord;
use crate::theta::ThetaSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepParam {
    Theta,
    Cycles,
    Seed,
    Trials,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Theta => "theta",
            SweepParam::Cycles => "cycles",
            SweepParam::Seed => "seed",
            SweepParam::Trials => "trials",
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A single sweep point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SweepValue {
    Integer(u64),
    Angle(ThetaSpec),
}

/// Expand a value list. Items are comma separated; integer parameters also
/// take ranges `a..b` (exclusive), `a..=b` (inclusive), optionally followed
/// by `:step`.
pub fn parse_values(param: SweepParam, text: &str) -> CliResult<Vec<SweepValue>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match param {
            SweepParam::Theta => out.push(SweepValue::Angle(item.parse()?)),
            _ => out.extend(parse_integers(item)?.into_iter().map(SweepValue::Integer)),
        }
    }
    if out.is_empty() {
        return Err(CliError::usage("values", "the value list is empty"));
    }
    Ok(out)
}

fn parse_integers(item: &str) -> CliResult<Vec<u64>> {
    let bad = || CliError::usage("values", format!("cannot parse {item:?}"));
    let (range, step) = match item.split_once(':') {
        Some((r, s)) => (r, u64::from_str(s).map_err(|_| bad())?),
        None => (item, 1),
    };
    if step == 0 {
        return Err(CliError::usage("values", "step must be positive"));
    }
    let Some((lo, hi)) = range.split_once("..") else {
        return Ok(vec![u64::from_str(range).map_err(|_| bad())?]);
    };
    let lo = u64::from_str(lo).map_err(|_| bad())?;
    let hi = match hi.strip_prefix('=') {
        Some(h) => u64::from_str(h).map_err(|_| bad())?,
        None => u64::from_str(hi).map_err(|_| bad())?.checked_sub(1).ok_or_else(bad)?,
    };
    Ok((lo..=hi).step_by(step as usize).collect())
}

fn apply(base: &ExperimentConfig, param: SweepParam, value: SweepValue) -> CliResult<ExperimentConfig> {
    let mut cfg = base.clone();
    let p = &mut cfg.params;
    match (param, value) {
        (SweepParam::Theta, SweepValue::Angle(t)) => p.theta = Some(t),
        (SweepParam::Cycles, SweepValue::Integer(n)) => {
            p.cycles = Some(u32::try_from(n).map_err(|_| CliError::usage("cycles", "too large"))?)
        }
        (SweepParam::Seed, SweepValue::Integer(n)) => p.seed = Some(n),
        (SweepParam::Trials, SweepValue::Integer(n)) => {
            p.trials = Some(u32::try_from(n).map_err(|_| CliError::usage("trials", "too large"))?)
        }
        _ => return Err(CliError::usage("values", format!("wrong value kind for `{param}`"))),
    }
    Ok(cfg)
}

/// One record per value, in input order.
pub fn sweep(base: &ExperimentConfig, param: SweepParam, values: &[SweepValue]) -> CliResult<Vec<ResultRecord>> {
    if values.is_empty() {
        return Err(CliError::usage("values", "the value list is empty"));
    }
    values.iter().map(|&v| compute(&apply(base, param, v)?)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_lists_and_ranges() {
        let ints = |s| {
            parse_values(SweepParam::Cycles, s)
                .unwrap()
                .into_iter()
                .map(|v| match v {
                    SweepValue::Integer(n) => n,
                    _ => unreachable!(),
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(ints("1,2, 5"), vec![1, 2, 5]);
        assert_eq!(ints("1..4"), vec![1, 2, 3]);
        assert_eq!(ints("3..=9:2"), vec![3, 5, 7, 9]);
        assert_eq!(ints("1..=100").len(), 100);
        assert_eq!(ints("3..=201:2").len(), 100);
    }

    #[test]
    fn bad_lists() {
        for s in ["", " , ", "a", "1..", "3..=9:0", "5..0"] {
            assert!(parse_values(SweepParam::Cycles, s).is_err(), "{s:?}");
        }
        assert!(parse_values(SweepParam::Theta, "pi/(N+1), 0.2").is_ok());
    }
}
