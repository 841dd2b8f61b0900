use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{Basis, Operator, PureState, C64};
use crate::{Error, Result, OPERATOR_TOL};

/// A classical value produced by a measurement or protocol step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassicalValue {
    Bit(u8),
    Label(String),
    Count(u32),
}

impl fmt::Display for ClassicalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassicalValue::Bit(b) => write!(f, "{b}"),
            ClassicalValue::Label(s) => f.write_str(s),
            ClassicalValue::Count(n) => write!(f, "{n}"),
        }
    }
}

/// Ordered classical record of a branch.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Record(Vec<(String, ClassicalValue)>);

impl Record {
    pub fn new() -> Self {
        Record(Vec::new())
    }

    pub fn with(mut self, name: &str, value: ClassicalValue) -> Self {
        self.push(name, value);
        self
    }

    pub fn push(&mut self, name: &str, value: ClassicalValue) {
        self.0.push((name.to_string(), value));
    }

    pub fn extend(&mut self, other: &Record) {
        self.0.extend(other.0.iter().cloned());
    }

    pub fn get(&self, name: &str) -> Option<&ClassicalValue> {
        self.0.iter().rev().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn bit(&self, name: &str) -> Option<u8> {
        match self.get(name)? {
            ClassicalValue::Bit(b) => Some(*b),
            _ => None,
        }
    }

    pub fn label(&self, name: &str) -> Option<&str> {
        match self.get(name)? {
            ClassicalValue::Label(s) => Some(s),
            _ => None,
        }
    }

    pub fn entries(&self) -> &[(String, ClassicalValue)] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BranchState {
    Pure(PureState),
    /// The photon was absorbed; nothing left to evolve.
    Absorbed,
    /// Zero-probability outcome; no post-measurement state exists.
    Unset,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub record: Record,
    pub probability: f64,
    pub state: BranchState,
}

impl Branch {
    pub fn absorbed(record: Record, probability: f64) -> Self {
        Branch { record, probability, state: BranchState::Absorbed }
    }

    pub fn pure_state(&self) -> Option<&PureState> {
        match &self.state {
            BranchState::Pure(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_absorbed(&self) -> bool {
        matches!(self.state, BranchState::Absorbed)
    }
}

/// Diagonal projector onto the basis elements selected by `keep`.
pub fn diagonal_projector(basis: &Basis, keep: impl Fn(usize) -> bool) -> Operator {
    Operator::from_fn(basis.clone(), |r, c| {
        if r == c && keep(r) {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// `|ψ⟩⟨ψ|`.
pub fn state_projector(state: &PureState) -> Operator {
    let a = state.amplitudes();
    Operator::outer(state.basis().clone(), a, a).expect("matching dimensions")
}

/// One projector per basis element, named by its label.
pub fn computational_projectors(basis: &Basis) -> Vec<(String, Operator)> {
    (0..basis.dim())
        .map(|i| (basis.label_string(i), diagonal_projector(basis, |k| k == i)))
        .collect()
}

fn validate_projectors(basis: &Basis, projectors: &[(String, Operator)]) -> Result<()> {
    if projectors.is_empty() {
        return Err(Error::InvalidProjectors("empty projector set"));
    }
    let mut sum = Operator::zeros(basis.clone());
    for (k, (_, p)) in projectors.iter().enumerate() {
        if p.basis() != basis {
            return Err(super::operator::basis_mismatch(basis, p.basis()));
        }
        if !p.is_hermitian(OPERATOR_TOL) {
            return Err(Error::InvalidProjectors("projector is not Hermitian"));
        }
        if !(p * p).approx_eq(p, OPERATOR_TOL) {
            return Err(Error::InvalidProjectors("projector is not idempotent"));
        }
        for (_, q) in &projectors[..k] {
            if (p * q).frobenius_norm() > OPERATOR_TOL {
                return Err(Error::InvalidProjectors("projectors are not mutually orthogonal"));
            }
        }
        sum = sum.checked_add(p)?;
    }
    if !sum.approx_eq(&Operator::identity(basis.clone()), OPERATOR_TOL) {
        return Err(Error::InvalidProjectors("projectors do not sum to the identity"));
    }
    Ok(())
}

/// Projective measurement. Emits one branch per projector, in order, with
/// probability `⟨s|P|s⟩ · weight` and the renormalized post-measurement state.
/// Outcomes of zero probability are kept with an unset state.
pub fn measure(state: &PureState, projectors: &[(String, Operator)]) -> Result<Vec<Branch>> {
    validate_projectors(state.basis(), projectors)?;
    let mut out = Vec::with_capacity(projectors.len());
    for (name, p) in projectors {
        let projected =
            super::operator::mat_vec(p.data(), p.dim(), state.amplitudes());
        let record = Record::new().with("outcome", ClassicalValue::Label(name.clone()));
        match PureState::from_unnormalized(state.basis().clone(), projected, state.weight()) {
            Some(post) if post.weight() > 0.0 => out.push(Branch {
                record,
                probability: post.weight(),
                state: BranchState::Pure(post),
            }),
            _ => out.push(Branch { record, probability: 0.0, state: BranchState::Unset }),
        }
    }
    Ok(out)
}
