//! Shutter gates on `(S1, S2) ⊗ (P1, P2, P1t, P2t)`.
//!
//! Each slit pair `(Pk, Pkt)` is served by one nested device, identified as
//! `H1 ≡ Pk`, `H2 ≡ Pkt`. The shutter in position `k` places the object in
//! device `k`; the other device is empty.

use alloc::vec::Vec;


use super::{device_basis, evolve_empty_closed, evolve_with_particle, ShutterCycleConfig};
use crate::quantum::{Basis, Operator, PortLabel, PureState, C64};
use crate::{Error, Result};
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// 2×2 action on one slit pair, `[row][col]` over `(Pk, Pkt)`.
pub type PairMatrix = [[C64; 2]; 2];

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const IDENTITY: PairMatrix = [[ONE, ZERO], [ZERO, ONE]];

/// How one slit pair responds with the object in it and without.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairResponse {
    pub occupied: PairMatrix,
    pub empty: PairMatrix,
}

impl PairResponse {
    /// Blocked pair swaps, open pair picks up `−1`.
    pub fn table2() -> Self {
        PairResponse { occupied: [[ZERO, ONE], [ONE, ZERO]], empty: [[-ONE, ZERO], [ZERO, -ONE]] }
    }

    /// Blocked pair swaps, open pair untouched.
    pub fn table1() -> Self {
        PairResponse { occupied: [[ZERO, ONE], [ONE, ZERO]], empty: IDENTITY }
    }
}

pub fn shutter_basis(register: u8) -> Basis {
    Basis::in_register(&[PortLabel::S1, PortLabel::S2], register).expect("distinct labels")
}

pub fn photon_basis(register: u8) -> Basis {
    Basis::in_register(&[PortLabel::P1, PortLabel::P2, PortLabel::P1t, PortLabel::P2t], register)
        .expect("distinct labels")
}

/// Shutter-controlled photon operator. The shutter basis states are never
/// changed by the gate; only the photon ports are.
#[derive(Clone, Debug, PartialEq)]
pub struct ShutterGate {
    op: Operator,
    lossless: bool,
}

impl ShutterGate {
    /// Assemble the gate for one shutter and one photon register. `slits[k]`
    /// says whether slit pair `k` passes through this shutter at all; a pair
    /// that bypasses it is left untouched.
    pub fn assemble(
        response: &PairResponse,
        slits: [bool; 2],
        shutter_register: u8,
        photon_register: u8,
    ) -> Result<Self> {
        let basis = shutter_basis(shutter_register).tensor(&photon_basis(photon_register))?;
        let mut op = Operator::zeros(basis);
        for s in 0..2 {
            for (k, &routed) in slits.iter().enumerate() {
                let m = if !routed {
                    IDENTITY
                } else if k == s {
                    response.occupied
                } else {
                    response.empty
                };
                let ports = [k, k + 2];
                for (i, &r) in ports.iter().enumerate() {
                    for (j, &c) in ports.iter().enumerate() {
                        op.set(s * 4 + r, s * 4 + c, m[i][j]);
                    }
                }
            }
        }
        let lossless = op.is_unitary(crate::OPERATOR_TOL);
        Ok(ShutterGate { op, lossless })
    }

    pub fn operator(&self) -> &Operator {
        &self.op
    }

    /// Unitary (no absorption or polarization leakage).
    pub fn is_lossless(&self) -> bool {
        self.lossless
    }

    /// Apply to a state containing this gate's shutter and photon registers.
    /// Lossy gates post-select: the surviving norm moves into the weight.
    pub fn apply(&self, state: &PureState) -> Result<Option<PureState>> {
        let op = self.op.lift(state.basis())?;
        if self.lossless {
            op.apply(state).map(Some)
        } else {
            op.apply_postselected(state)
        }
    }
}

/// Ideal gate: the occupied slit pair swaps, the open pair picks up `−1`.
pub fn ideal_gate_table2() -> ShutterGate {
    ShutterGate::assemble(&PairResponse::table2(), [true, true], 0, 0).expect("fixed registers")
}

/// Ideal gate without the `−1` on the open pair.
pub fn ideal_gate_table1() -> ShutterGate {
    ShutterGate::assemble(&PairResponse::table1(), [true, true], 0, 0).expect("fixed registers")
}

/// Finite-`N` shutter gate built from two nested devices.
#[derive(Clone, Debug)]
pub struct RealizedGate {
    pub theta: f64,
    pub cycles: u32,
    /// H-sector amplitudes (surviving, horizontally polarized output); a contraction.
    pub gate: ShutterGate,
    pub response: PairResponse,
    /// Absorption plus V-exit probability for each of the 8 basis inputs.
    pub input_leakage: Vec<f64>,
    /// Worst case over basis inputs.
    pub leakage: f64,
    /// Worst case over inputs whose slit pair is empty (V exit only).
    pub empty_leakage: f64,
    /// Absorption probability for an input into the occupied pair.
    pub absorption: f64,
}

impl RealizedGate {
    /// Normalized output for basis input `index` after post-selecting on
    /// survival with H polarization.
    pub fn postselected_action(&self, index: usize) -> Option<PureState> {
        let op = self.gate.operator();
        PureState::from_unnormalized(op.basis().clone(), op.column(index), 1.0).map(|s| s.reweighted(1.0))
    }

    /// Largest entrywise deviation of the column-normalized H-sector action
    /// from `ideal`.
    pub fn postselected_deviation(&self, ideal: &ShutterGate) -> f64 {
        let dim = self.gate.operator().dim();
        (0..dim)
            .map(|c| match self.postselected_action(c) {
                Some(s) => s
                    .amplitudes()
                    .iter()
                    .zip(ideal.operator().column(c))
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max),
                None => f64::INFINITY,
            })
            .fold(0.0, f64::max)
    }
}

/// Assemble the finite-`N` gate, empty pair from the closed-form evolution
/// and occupied pair from the cycle-by-cycle absorption model.
pub fn realized_gate(theta: f64, cycles: u32) -> Result<RealizedGate> {
    let cfg = ShutterCycleConfig::new(theta, cycles, true)?;
    let empty_op = evolve_empty_closed(theta, cycles)?;
    // device inputs H1 (index 0) and H2 (index 2) stand for Pk and Pkt
    let device_inputs = [0usize, 2];

    let mut occupied = [[ZERO; 2]; 2];
    let mut occupied_leak = [0.0; 2];
    let mut absorption: f64 = 0.0;
    for (j, &input) in device_inputs.iter().enumerate() {
        let branches = evolve_with_particle(&cfg, &PureState::basis_state(device_basis(), input))?;
        let absorbed = branches[0].probability;
        absorption = absorption.max(absorbed);
        let mut v_exit = 0.0;
        if let Some(s) = branches[1].pure_state() {
            let scale = s.weight().sqrt();
            for (i, &out) in device_inputs.iter().enumerate() {
                occupied[i][j] = s.amplitudes()[out] * scale;
            }
            v_exit = s.weight() * (s.probability(1) + s.probability(3));
        }
        occupied_leak[j] = absorbed + v_exit;
    }

    let mut empty = [[ZERO; 2]; 2];
    let mut empty_leak = [0.0; 2];
    for (j, &input) in device_inputs.iter().enumerate() {
        for (i, &out) in device_inputs.iter().enumerate() {
            empty[i][j] = empty_op.get(out, input);
        }
        empty_leak[j] = empty_op.get(1, input).norm_sqr() + empty_op.get(3, input).norm_sqr();
    }

    let response = PairResponse { occupied, empty };
    let gate = ShutterGate::assemble(&response, [true, true], 0, 0)?;
    let mut input_leakage = Vec::with_capacity(8);
    for s in 0..2 {
        for port in 0..4 {
            let (pair, side) = (port % 2, port / 2);
            input_leakage.push(if pair == s { occupied_leak[side] } else { empty_leak[side] });
        }
    }
    if input_leakage.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(RealizedGate {
        theta,
        cycles,
        gate,
        response,
        leakage: input_leakage.iter().copied().fold(0.0, f64::max),
        empty_leakage: empty_leak[0].max(empty_leak[1]),
        absorption,
        input_leakage,
    })
}
