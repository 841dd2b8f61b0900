//! Quantum memory and CNOT built on shutter gates.
//!
//! A logical qubit rides on a single photon spread over the four slit ports:
//! `|0⟩ ↦ (P1 − P1t)/√2`, `|1⟩ ↦ (P2 + P2t)/√2`. Shutter states are read in
//! the `|±⟩ = (S1 ± S2)/√2` basis.

mod cnot;
mod memory;

pub use cnot::{
    cnot_protocol, cnot_protocol_with, cnot_target, derive_all_corrections_with,
    derive_branch_corrections, derive_branch_corrections_with, run_cnot, stored_pair_state, store_pair, store_pair_with,
    CnotBranch, Correction, PairBranch, TwoQubitState,
};
pub use memory::{
    apply_read_corrections, memory_read, memory_read_with, memory_roundtrip,
    memory_roundtrip_with, memory_write, memory_write_with, port_bit, RoundTripBranch,
};

use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;


use crate::quantum::{Basis, Operator, PortLabel, PureState, Record, C64};
use crate::shutter::{photon_basis, shutter_basis};
use crate::{Error, Result, PROBABILITY_TOL};
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

const ZERO: C64 = C64::new(0.0, 0.0);
const R: C64 = C64::new(FRAC_1_SQRT_2, 0.0);

/// `α|0⟩ + β|1⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogicalQubit {
    pub alpha: C64,
    pub beta: C64,
}

impl LogicalQubit {
    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        let n2 = alpha.norm_sqr() + beta.norm_sqr();
        if (n2 - 1.0).abs() > PROBABILITY_TOL || !n2.is_finite() {
            return Err(Error::InvalidQubit(n2));
        }
        Ok(LogicalQubit { alpha, beta })
    }

    /// Normalize an arbitrary non-zero pair.
    pub fn normalized(alpha: C64, beta: C64) -> Result<Self> {
        let n = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidQubit(n * n));
        }
        LogicalQubit::new(alpha / n, beta / n)
    }

    pub const fn zero() -> Self {
        LogicalQubit { alpha: C64::new(1.0, 0.0), beta: ZERO }
    }

    pub const fn one() -> Self {
        LogicalQubit { alpha: ZERO, beta: C64::new(1.0, 0.0) }
    }

    pub const fn plus() -> Self {
        LogicalQubit { alpha: R, beta: R }
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &LogicalQubit) -> f64 {
        (self.alpha.conj() * other.alpha + self.beta.conj() * other.beta).norm_sqr()
    }
}

/// Photon port image of a logical qubit, in photon register `register`.
pub fn encode_logical(q: &LogicalQubit, register: u8) -> PureState {
    let a = q.alpha * R;
    let b = q.beta * R;
    PureState::new(photon_basis(register), alloc::vec![a, b, -a, b]).expect("isometric encoding")
}

/// Recover the logical amplitudes of a single-photon port state. Fails if the
/// photon has support outside the encoded subspace.
pub fn decode_logical(photon: &PureState) -> Result<LogicalQubit> {
    if photon.basis().factors().len() != 1 || photon.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: photon.dim() });
    }
    let register = photon.basis().factors()[0][0].register;
    if photon.basis() != &photon_basis(register) {
        return Err(Error::ProtocolConsistency("state is not a photon port state"));
    }
    let v = photon.amplitudes();
    let alpha = (v[0] - v[2]) * R;
    let beta = (v[1] + v[3]) * R;
    let n2 = alpha.norm_sqr() + beta.norm_sqr();
    if (n2 - 1.0).abs() > 1e-9 {
        return Err(Error::ProtocolConsistency("photon left the logical subspace"));
    }
    LogicalQubit::normalized(alpha, beta)
}

/// 2×2 mixer applied to both port pairs `(P1, P2)` and `(P1t, P2t)`:
/// `(1/√2) [[−1, 1], [1, 1]]` (columns are the images of `Pk` and `P(k+1)`).
///
/// This sign choice sends `|0⟩ ↦ (−P1 + P2 + P1t − P2t)/2` and
/// `|1⟩ ↦ (P1 + P2 + P1t + P2t)/2`, which leaves the shutter of a write in
/// `(−1)ᵃ α|+⟩ − β|−⟩` for every port outcome.
pub const PORT_MIXER: [[f64; 2]; 2] = [[-FRAC_1_SQRT_2, FRAC_1_SQRT_2], [FRAC_1_SQRT_2, FRAC_1_SQRT_2]];

pub fn port_hadamard(register: u8) -> Operator {
    let mut op = Operator::zeros(photon_basis(register));
    for pair in [[0usize, 1], [2, 3]] {
        for (i, &r) in pair.iter().enumerate() {
            for (j, &c) in pair.iter().enumerate() {
                op.set(r, c, C64::new(PORT_MIXER[i][j], 0.0));
            }
        }
    }
    op
}

/// `|+⟩` (`sign = 1`) or `|−⟩` (`sign = −1`) of a shutter register.
pub fn shutter_pm(register: u8, minus: bool) -> PureState {
    let s = if minus { -R } else { R };
    PureState::new(shutter_basis(register), alloc::vec![R, s]).expect("normalized")
}

/// `x|+⟩ + y|−⟩` in the `(S1, S2)` basis; `None` when both vanish.
pub fn shutter_from_pm(register: u8, x: C64, y: C64) -> Option<PureState> {
    PureState::from_unnormalized(shutter_basis(register), alloc::vec![(x + y) * R, (x - y) * R], 1.0)
        .map(|s| s.reweighted(1.0))
}

/// Expected shutter after a write: `(−1)ᵃ α|+⟩ − β|−⟩`.
pub fn written_shutter(q: &LogicalQubit, a: u8) -> PureState {
    let sign = if a == 0 { 1.0 } else { -1.0 };
    shutter_from_pm(0, q.alpha * sign, -q.beta).expect("normalized qubit")
}

/// One classical outcome of a protocol run.
#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolOutcome {
    pub record: Record,
    pub probability: f64,
    pub final_state: PureState,
}

/// Sum of outcome probabilities.
pub fn total_probability(outcomes: &[ProtocolOutcome]) -> f64 {
    outcomes.iter().map(|o| o.probability).sum()
}

pub(crate) fn port_projectors(register: u8) -> Vec<(alloc::string::String, Operator)> {
    crate::quantum::computational_projectors(&photon_basis(register))
}

pub(crate) fn logical_basis(register: u8) -> Basis {
    Basis::in_register(&[PortLabel::L0, PortLabel::L1], register).expect("distinct labels")
}
