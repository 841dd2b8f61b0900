//! Shutter CNOT.
//!
//! Two-qubit kets are `|xy⟩` with `x` the control, stored in shutter
//! register 2, and `y` the target, stored in shutter register 1. A probe photon
//! (register 3) carrying `(|0⟩ + (−1)^{a₁}|1⟩)/√2` passes shutter 2 and then,
//! through slit pair 2 only, shutter 1. Shutter 2 is measured in `|±⟩`;
//! shutter 1 is read out with a second photon (register 4) exactly as in a
//! memory read. The two photons then carry the control and target qubits.

use alloc::vec::Vec;
use core::fmt;


use super::{
    encode_logical, logical_basis, port_hadamard, port_projectors, shutter_pm, LogicalQubit,
    ProtocolOutcome, R,
};
use crate::quantum::{measure, ClassicalValue, PureState, Record, C64};
use crate::shutter::{photon_basis, shutter_basis, PairResponse, ShutterGate};
use crate::{Error, Result, PROBABILITY_TOL};
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

const CONTROL_SHUTTER: u8 = 2;
const TARGET_SHUTTER: u8 = 1;
const PROBE_PHOTON: u8 = 3;
const READ_PHOTON: u8 = 4;

/// `α|00⟩ + β|01⟩ + γ|10⟩ + δ|11⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitState {
    pub amps: [C64; 4],
}

impl TwoQubitState {
    pub fn new(amps: [C64; 4]) -> Result<Self> {
        let n2: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (n2 - 1.0).abs() > PROBABILITY_TOL || !n2.is_finite() {
            return Err(Error::InvalidQubit(n2));
        }
        Ok(TwoQubitState { amps })
    }

    /// Normalize an arbitrary non-zero amplitude vector.
    pub fn normalized(amps: [C64; 4]) -> Result<Self> {
        let n: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidQubit(n * n));
        }
        TwoQubitState::new(amps.map(|z| z / n))
    }

    pub fn basis_state(index: usize) -> Self {
        let mut amps = [C64::new(0.0, 0.0); 4];
        amps[index] = C64::new(1.0, 0.0);
        TwoQubitState { amps }
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &TwoQubitState) -> f64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum::<C64>().norm_sqr()
    }
}

/// `α|00⟩ + β|01⟩ + γ|11⟩ + δ|10⟩`.
pub fn cnot_target(q: &TwoQubitState) -> TwoQubitState {
    let [a, b, c, d] = q.amps;
    TwoQubitState { amps: [a, b, d, c] }
}

/// `|±±⟩` outcome of measuring (control shutter, target shutter).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairBranch {
    PlusPlus,
    PlusMinus,
    MinusPlus,
    MinusMinus,
}

impl PairBranch {
    pub const ALL: [PairBranch; 4] =
        [PairBranch::PlusPlus, PairBranch::PlusMinus, PairBranch::MinusPlus, PairBranch::MinusMinus];

    pub fn label(self) -> &'static str {
        match self {
            PairBranch::PlusPlus => "++",
            PairBranch::PlusMinus => "+-",
            PairBranch::MinusPlus => "-+",
            PairBranch::MinusMinus => "--",
        }
    }

    fn minus(self) -> (bool, bool) {
        match self {
            PairBranch::PlusPlus => (false, false),
            PairBranch::PlusMinus => (false, true),
            PairBranch::MinusPlus => (true, false),
            PairBranch::MinusMinus => (true, true),
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        PairBranch::ALL.into_iter().find(|b| b.label() == s)
    }
}

impl fmt::Display for PairBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn sign(bit: u8) -> f64 {
    if bit == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Shutter-pair state left by writing `q` qubit by qubit:
/// `(−1)^{a₁+a₂}α|++⟩ − (−1)^{a₂}β|+−⟩ − (−1)^{a₁}γ|−+⟩ + δ|−−⟩`, control
/// shutter first.
pub fn stored_pair_state(q: &TwoQubitState, a1: u8, a2: u8) -> PureState {
    let basis = shutter_basis(CONTROL_SHUTTER).tensor(&shutter_basis(TARGET_SHUTTER)).expect("distinct");
    // single-qubit write: |0⟩ ↦ (−1)ᵃ|+⟩, |1⟩ ↦ −|−⟩, as (S1, S2) amplitudes
    let image = |bit: usize, a: u8| -> [f64; 2] {
        if bit == 0 {
            [sign(a) * R.re, sign(a) * R.re]
        } else {
            [-R.re, R.re]
        }
    };
    let mut amps = alloc::vec![C64::new(0.0, 0.0); 4];
    for (k, &c) in q.amps.iter().enumerate() {
        let (x, y) = (k >> 1, k & 1);
        let (u, v) = (image(x, a2), image(y, a1));
        for s2 in 0..2 {
            for s1 in 0..2 {
                amps[s2 * 2 + s1] += c * u[s2] * v[s1];
            }
        }
    }
    PureState::new(basis, amps).expect("isometric write")
}

pub fn store_pair(q: &TwoQubitState) -> Result<Vec<ProtocolOutcome>> {
    store_pair_with(q, &PairResponse::table2())
}

/// Write both qubits by direct simulation: the control qubit's photon into
/// shutter 2 while the target qubit is still an abstract logical register,
/// then the target qubit's photon into shutter 1. Outcomes carry `a1`, `a2`
/// and the joint shutter state (control shutter first).
pub fn store_pair_with(q: &TwoQubitState, response: &PairResponse) -> Result<Vec<ProtocolOutcome>> {
    const CONTROL_PHOTON: u8 = 5;
    const TARGET_PHOTON: u8 = 6;
    let enc = [
        encode_logical(&LogicalQubit::zero(), 0).amplitudes().to_vec(),
        encode_logical(&LogicalQubit::one(), 0).amplitudes().to_vec(),
    ];
    let plus = [R, R];

    let basis = shutter_basis(CONTROL_SHUTTER)
        .tensor(&logical_basis(TARGET_SHUTTER))?
        .tensor(&photon_basis(CONTROL_PHOTON))?;
    let mut amps = alloc::vec![C64::new(0.0, 0.0); basis.dim()];
    for s in 0..2 {
        for y in 0..2 {
            for p in 0..4 {
                let v: C64 = (0..2).map(|x| q.amps[2 * x + y] * enc[x][p]).sum();
                amps[(s * 2 + y) * 4 + p] = plus[s] * v;
            }
        }
    }
    let initial = PureState::new(basis, amps)?;

    let mut out = Vec::with_capacity(16);
    for (port2, a2, half) in write_photon(&initial, CONTROL_SHUTTER, CONTROL_PHOTON, response)? {
        // half: (S#2, L#1); re-encode the target register onto its own photon
        let basis = shutter_basis(CONTROL_SHUTTER)
            .tensor(&shutter_basis(TARGET_SHUTTER))?
            .tensor(&photon_basis(TARGET_PHOTON))?;
        let mut amps = alloc::vec![C64::new(0.0, 0.0); basis.dim()];
        let c = half.amplitudes();
        for s2 in 0..2 {
            for s1 in 0..2 {
                for p in 0..4 {
                    let v: C64 = (0..2).map(|y| c[s2 * 2 + y] * enc[y][p]).sum();
                    amps[(s2 * 2 + s1) * 4 + p] = plus[s1] * v;
                }
            }
        }
        let joint = PureState::with_weight(basis, amps, half.weight())?;
        for (port1, a1, stored) in write_photon(&joint, TARGET_SHUTTER, TARGET_PHOTON, response)? {
            out.push(ProtocolOutcome {
                record: Record::new()
                    .with("port2", ClassicalValue::Label(port2.clone()))
                    .with("a2", ClassicalValue::Bit(a2))
                    .with("port1", ClassicalValue::Label(port1))
                    .with("a1", ClassicalValue::Bit(a1)),
                probability: stored.weight(),
                final_state: stored,
            });
        }
    }
    Ok(out)
}

/// Gate, port mixer and port measurement for the photon in `photon`
/// interacting with shutter `shutter`; yields (port, a, remaining state).
fn write_photon(
    state: &PureState,
    shutter: u8,
    photon: u8,
    response: &PairResponse,
) -> Result<Vec<(alloc::string::String, u8, PureState)>> {
    let gate = ShutterGate::assemble(response, [true, true], shutter, photon)?;
    let Some(after) = gate.apply(state)? else {
        return Ok(Vec::new());
    };
    let mixed = port_hadamard(photon).lift(after.basis())?.apply(&after)?;
    let projectors: Vec<_> = port_projectors(photon)
        .into_iter()
        .map(|(n, p)| p.lift(mixed.basis()).map(|p| (n, p)))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for (k, branch) in measure(&mixed, &projectors)?.into_iter().enumerate() {
        let Some(post) = branch.pure_state() else { continue };
        let port_state = PureState::basis_state(photon_basis(photon), k);
        let port = port_state.basis().label(k)[0].label;
        let rest = post
            .factor_out(&port_state)?
            .ok_or(Error::ProtocolConsistency("detected port carries no amplitude"))?;
        out.push((port.as_str().into(), super::port_bit(port).expect("photon port"), rest));
    }
    Ok(out)
}

pub fn cnot_protocol(q: &TwoQubitState, a1: u8, a2: u8) -> Result<Vec<ProtocolOutcome>> {
    cnot_protocol_with(q, a1, a2, &PairResponse::table2())
}

/// Run the CNOT interaction on the stored pair and measure both shutters.
/// One outcome per `|±±⟩` branch, with the two photons' logical state over
/// `(L0, L1)#3 ⊗ (L0, L1)#4` (control photon first).
pub fn cnot_protocol_with(
    q: &TwoQubitState,
    a1: u8,
    a2: u8,
    response: &PairResponse,
) -> Result<Vec<ProtocolOutcome>> {
    let stored = stored_pair_state(q, a1, a2);
    let probe = LogicalQubit::normalized(C64::new(1.0, 0.0), C64::new(sign(a1), 0.0))?;
    let mut psi = stored.tensor(&encode_logical(&probe, PROBE_PHOTON))?;
    let through_control = ShutterGate::assemble(response, [true, true], CONTROL_SHUTTER, PROBE_PHOTON)?;
    let through_target = ShutterGate::assemble(response, [false, true], TARGET_SHUTTER, PROBE_PHOTON)?;
    let readout = ShutterGate::assemble(response, [true, true], TARGET_SHUTTER, READ_PHOTON)?;
    for gate in [&through_control, &through_target] {
        psi = match gate.apply(&psi)? {
            Some(s) => s,
            None => return Ok(Vec::new()),
        };
    }
    psi = psi.tensor(&encode_logical(&LogicalQubit::plus(), READ_PHOTON))?;
    psi = match readout.apply(&psi)? {
        Some(s) => s,
        None => return Ok(Vec::new()),
    };

    let enc = [
        encode_logical(&LogicalQubit::zero(), 0).amplitudes().to_vec(),
        encode_logical(&LogicalQubit::one(), 0).amplitudes().to_vec(),
    ];
    let out_basis = logical_basis(PROBE_PHOTON).tensor(&logical_basis(READ_PHOTON))?;
    let mut out = Vec::with_capacity(4);
    for branch in PairBranch::ALL {
        let (m2, m1) = branch.minus();
        let bra = shutter_pm(CONTROL_SHUTTER, m2).tensor(&shutter_pm(TARGET_SHUTTER, m1))?;
        let (rest, raw) = psi.partial_inner(&bra)?;
        debug_assert_eq!(rest, photon_basis(PROBE_PHOTON).tensor(&photon_basis(READ_PHOTON))?);
        let mut logical = alloc::vec![C64::new(0.0, 0.0); 4];
        for x in 0..2 {
            for y in 0..2 {
                logical[x * 2 + y] = (0..16)
                    .map(|k| (enc[x][k / 4] * enc[y][k % 4]).conj() * raw[k])
                    .sum();
            }
        }
        let raw_norm: f64 = raw.iter().map(|z| z.norm_sqr()).sum();
        let logical_norm: f64 = logical.iter().map(|z| z.norm_sqr()).sum();
        if (raw_norm - logical_norm).abs() > 1e-9 {
            return Err(Error::ProtocolConsistency("photons left the logical subspace"));
        }
        let Some(state) = PureState::from_unnormalized(out_basis.clone(), logical, psi.weight()) else {
            continue;
        };
        out.push(ProtocolOutcome {
            record: Record::new()
                .with("a1", ClassicalValue::Bit(a1))
                .with("a2", ClassicalValue::Bit(a2))
                .with("branch", ClassicalValue::Label(branch.label().into())),
            probability: state.weight(),
            final_state: state,
        });
    }
    Ok(out)
}

/// Bit flips on (control, target) followed by per-ket signs on
/// `(|00⟩, |01⟩, |10⟩, |11⟩)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Correction {
    pub flip_control: bool,
    pub flip_target: bool,
    pub signs: [i8; 4],
}

impl Correction {
    fn mask(&self) -> usize {
        (self.flip_control as usize) << 1 | self.flip_target as usize
    }

    pub fn apply(&self, amps: &[C64; 4]) -> [C64; 4] {
        let mut out = [C64::new(0.0, 0.0); 4];
        for (j, a) in amps.iter().enumerate() {
            out[j ^ self.mask()] = *a;
        }
        for (z, &s) in out.iter_mut().zip(&self.signs) {
            *z *= s as f64;
        }
        out
    }
}

pub fn derive_branch_corrections(branch: PairBranch, a1: u8, a2: u8) -> Result<Correction> {
    derive_branch_corrections_with(branch, a1, a2, &PairResponse::table2())
}

/// Find the flip+sign correction taking `branch`'s photon state to
/// `CNOT(input)`, by running the protocol on the four basis inputs.
pub fn derive_branch_corrections_with(
    branch: PairBranch,
    a1: u8,
    a2: u8,
    response: &PairResponse,
) -> Result<Correction> {
    let all = derive_all_corrections_with(a1, a2, response)?;
    let k = PairBranch::ALL.iter().position(|b| *b == branch).expect("listed branch");
    Ok(all[k])
}

/// Corrections for every branch, in `PairBranch::ALL` order, from a single set
/// of four basis-input runs.
pub fn derive_all_corrections_with(a1: u8, a2: u8, response: &PairResponse) -> Result<[Correction; 4]> {
    let mut columns = [[[C64::new(0.0, 0.0); 4]; 4]; 4];
    #[allow(clippy::needless_range_loop)]
    for j in 0..4 {
        let outs = cnot_protocol_with(&TwoQubitState::basis_state(j), a1, a2, response)?;
        for (k, branch) in PairBranch::ALL.iter().enumerate() {
            let hit = outs
                .iter()
                .find(|o| o.record.label("branch") == Some(branch.label()))
                .ok_or(Error::ProtocolConsistency("branch unreachable for a basis input"))?;
            columns[k][j].copy_from_slice(hit.final_state.amplitudes());
        }
    }
    let mut out = [Correction { flip_control: false, flip_target: false, signs: [1; 4] }; 4];
    for (slot, cols) in out.iter_mut().zip(&columns) {
        *slot = solve_correction(cols)?;
    }
    Ok(out)
}

/// `columns[j]` is the branch output for basis input `j`.
fn solve_correction(columns: &[[C64; 4]; 4]) -> Result<Correction> {
    'flips: for mask in 0..4usize {
        let mut diag = [C64::new(0.0, 0.0); 4];
        for (j, col) in columns.iter().enumerate() {
            let target = j ^ ((j >> 1) & 1);
            for (i, z) in col.iter().enumerate() {
                let k = i ^ mask;
                if k == target {
                    diag[k] = *z;
                } else if z.norm() > 1e-9 {
                    continue 'flips;
                }
            }
        }
        let reference = diag[0];
        let mut signs = [0i8; 4];
        for (s, d) in signs.iter_mut().zip(&diag) {
            // sign needed to bring this ket in line with |00⟩
            let r = reference * d.conj();
            if (r.norm() - 1.0).abs() > 1e-9 || r.im.abs() > 1e-9 {
                continue 'flips;
            }
            *s = if r.re > 0.0 { 1 } else { -1 };
        }
        return Ok(Correction { flip_control: mask & 2 != 0, flip_target: mask & 1 != 0, signs });
    }
    Err(Error::ProtocolConsistency("no flip+sign correction maps the branch onto CNOT"))
}

/// One measured branch of a corrected CNOT run.
#[derive(Clone, Debug)]
pub struct CnotBranch {
    pub branch: PairBranch,
    pub a1: u8,
    pub a2: u8,
    pub probability: f64,
    pub raw: TwoQubitState,
    pub correction: Correction,
    pub corrected: TwoQubitState,
    /// Fidelity of `corrected` with `CNOT(input)`.
    pub fidelity: f64,
}

/// CNOT interaction, branch measurement and feedforward correction.
pub fn run_cnot(q: &TwoQubitState, a1: u8, a2: u8) -> Result<Vec<CnotBranch>> {
    let target = cnot_target(q);
    let corrections = derive_all_corrections_with(a1, a2, &PairResponse::table2())?;
    let mut out = Vec::with_capacity(4);
    for o in cnot_protocol(q, a1, a2)? {
        let branch = o
            .record
            .label("branch")
            .and_then(PairBranch::from_label)
            .expect("cnot records its branch");
        let correction = corrections[PairBranch::ALL.iter().position(|b| *b == branch).expect("listed branch")];
        let mut raw = [C64::new(0.0, 0.0); 4];
        raw.copy_from_slice(o.final_state.amplitudes());
        let corrected = TwoQubitState { amps: correction.apply(&raw) };
        out.push(CnotBranch {
            branch,
            a1,
            a2,
            probability: o.probability,
            raw: TwoQubitState { amps: raw },
            correction,
            corrected,
            fidelity: corrected.fidelity(&target),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn target_swaps_last_two() {
        let q = TwoQubitState::basis_state(2);
        assert_eq!(cnot_target(&q), TwoQubitState::basis_state(3));
    }

    #[test]
    fn basis_zero_zero_is_fixed() {
        for a1 in 0..2 {
            for a2 in 0..2 {
                let runs = run_cnot(&TwoQubitState::basis_state(0), a1, a2).unwrap();
                let total: f64 = runs.iter().map(|r| r.probability).sum();
                assert!((total - 1.0).abs() < 1e-12);
                for r in runs {
                    assert!(r.corrected.fidelity(&TwoQubitState::basis_state(0)) > 1.0 - 1e-12);
                }
            }
        }
    }

    #[test]
    fn plus_plus_correction_without_flips() {
        let c = derive_branch_corrections(PairBranch::PlusPlus, 0, 0).unwrap();
        assert!(!c.flip_control && !c.flip_target);
        assert_eq!(c.signs, [1, -1, -1, 1]);
    }

    #[test]
    fn minus_minus_correction_flips_control() {
        let c = derive_branch_corrections(PairBranch::MinusMinus, 0, 0).unwrap();
        assert!(c.flip_control);
    }

    #[test]
    fn stored_pair_matches_simulated_writes() {
        let q = TwoQubitState::normalized([
            C64::new(0.5, 0.1),
            C64::new(-0.3, 0.4),
            C64::new(0.2, -0.5),
            C64::new(0.0, 0.0),
        ])
        .unwrap();
        let outs = store_pair(&q).unwrap();
        assert_eq!(outs.len(), 16);
        let total: f64 = outs.iter().map(|o| o.probability).sum();
        assert!((total - 1.0).abs() < 1e-12);
        for o in outs {
            let a1 = o.record.bit("a1").unwrap();
            let a2 = o.record.bit("a2").unwrap();
            let f = stored_pair_state(&q, a1, a2).fidelity(&o.final_state).unwrap();
            assert!((f - 1.0).abs() < 1e-12, "a1={a1} a2={a2} f={f}");
        }
    }
}
