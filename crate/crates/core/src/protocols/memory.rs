use alloc::vec::Vec;

use super::{
    decode_logical, encode_logical, port_hadamard, port_projectors, shutter_pm, LogicalQubit,
    ProtocolOutcome,
};
use crate::quantum::{measure, ClassicalValue, PortLabel, PureState, Record};
use crate::shutter::{PairResponse, ShutterGate};
use crate::{Error, Result};

/// Bit `a` assigned to a photon detected in `port` after the port mixer:
/// `0` for `P1`/`P2t`, `1` for `P2`/`P1t`.
pub fn port_bit(port: PortLabel) -> Option<u8> {
    match port {
        PortLabel::P1 | PortLabel::P2t => Some(0),
        PortLabel::P2 | PortLabel::P1t => Some(1),
        _ => None,
    }
}

pub fn memory_write(q: &LogicalQubit) -> Result<Vec<ProtocolOutcome>> {
    memory_write_with(q, &PairResponse::table2())
}

/// Store `q` in a shutter prepared in `|+⟩`. One outcome per detected port,
/// each with record `port`, `a` and the shutter state left behind.
pub fn memory_write_with(q: &LogicalQubit, response: &PairResponse) -> Result<Vec<ProtocolOutcome>> {
    let gate = ShutterGate::assemble(response, [true, true], 0, 0)?;
    let joint = shutter_pm(0, false).tensor(&encode_logical(q, 0))?;
    let Some(after) = gate.apply(&joint)? else {
        return Ok(Vec::new());
    };
    let mixed = port_hadamard(0).lift(after.basis())?.apply(&after)?;
    let projectors: Vec<_> = port_projectors(0)
        .into_iter()
        .map(|(n, p)| p.lift(mixed.basis()).map(|p| (n, p)))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(4);
    for (k, branch) in measure(&mixed, &projectors)?.into_iter().enumerate() {
        let Some(post) = branch.pure_state() else { continue };
        let port_state = PureState::basis_state(crate::shutter::photon_basis(0), k);
        let port = port_state.basis().label(k)[0].label;
        let shutter = post
            .factor_out(&port_state)?
            .ok_or(Error::ProtocolConsistency("detected port carries no amplitude"))?;
        let a = port_bit(port).expect("photon port");
        out.push(ProtocolOutcome {
            record: Record::new()
                .with("port", ClassicalValue::Label(port.as_str().into()))
                .with("a", ClassicalValue::Bit(a)),
            probability: branch.probability,
            final_state: shutter,
        });
    }
    Ok(out)
}

pub fn memory_read(shutter: &PureState, a: u8) -> Result<Vec<ProtocolOutcome>> {
    memory_read_with(shutter, a, &PairResponse::table2())
}

/// Probe the stored shutter with `(|0⟩ + |1⟩)/√2` and measure it in the
/// `|±⟩` basis. Outcomes carry `a` (passed through), `b` (0 for `|+⟩`) and the
/// photon port state.
pub fn memory_read_with(shutter: &PureState, a: u8, response: &PairResponse) -> Result<Vec<ProtocolOutcome>> {
    let gate = ShutterGate::assemble(response, [true, true], 0, 0)?;
    let joint = shutter.tensor(&encode_logical(&LogicalQubit::plus(), 0))?;
    let Some(after) = gate.apply(&joint)? else {
        return Ok(Vec::new());
    };
    let projectors = [false, true]
        .into_iter()
        .map(|minus| {
            let name = if minus { "-" } else { "+" };
            crate::quantum::state_projector(&shutter_pm(0, minus))
                .lift(after.basis())
                .map(|p| (name.into(), p))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(2);
    for (b, branch) in measure(&after, &projectors)?.into_iter().enumerate() {
        let Some(post) = branch.pure_state() else { continue };
        let photon = post
            .factor_out(&shutter_pm(0, b == 1))?
            .ok_or(Error::ProtocolConsistency("shutter outcome carries no amplitude"))?;
        out.push(ProtocolOutcome {
            record: Record::new().with("a", ClassicalValue::Bit(a)).with("b", ClassicalValue::Bit(b as u8)),
            probability: branch.probability,
            final_state: photon,
        });
    }
    Ok(out)
}

/// Classically controlled NOT on `b`, then a sign flip of `|0⟩` when `a = 0`.
pub fn apply_read_corrections(q: &LogicalQubit, a: u8, b: u8) -> LogicalQubit {
    let (mut alpha, beta) = if b == 1 { (q.beta, q.alpha) } else { (q.alpha, q.beta) };
    if a == 0 {
        alpha = -alpha;
    }
    LogicalQubit { alpha, beta }
}

/// One write-branch × read-branch path of a memory round trip.
#[derive(Clone, Debug)]
pub struct RoundTripBranch {
    pub record: Record,
    pub probability: f64,
    /// Fidelity of the written shutter with `(−1)ᵃ α|+⟩ − β|−⟩`.
    pub write_fidelity: f64,
    pub recovered: LogicalQubit,
    /// Fidelity of the corrected photon qubit with the input.
    pub fidelity: f64,
}

pub fn memory_roundtrip(q: &LogicalQubit) -> Result<Vec<RoundTripBranch>> {
    memory_roundtrip_with(q, &PairResponse::table2())
}

/// Write, read and correct, enumerating every branch.
pub fn memory_roundtrip_with(q: &LogicalQubit, response: &PairResponse) -> Result<Vec<RoundTripBranch>> {
    let mut out = Vec::with_capacity(8);
    for written in memory_write_with(q, response)? {
        let a = written.record.bit("a").expect("write records a");
        let write_fidelity = super::written_shutter(q, a).fidelity(&written.final_state)?;
        let stored = written.final_state.clone().reweighted(1.0);
        for read in memory_read_with(&stored, a, response)? {
            let b = read.record.bit("b").expect("read records b");
            let photon = decode_logical(&read.final_state)?;
            let recovered = apply_read_corrections(&photon, a, b);
            let mut record = written.record.clone();
            record.push("b", ClassicalValue::Bit(b));
            out.push(RoundTripBranch {
                record,
                probability: written.probability * read.probability,
                write_fidelity,
                recovered,
                fidelity: q.fidelity(&recovered),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::{shutter_from_pm, total_probability, written_shutter};
    use crate::quantum::C64;

    #[test]
    fn write_zero_leaves_plus() {
        let outs = memory_write(&LogicalQubit::zero()).unwrap();
        assert_eq!(outs.len(), 4);
        for o in &outs {
            assert!(o.final_state.fidelity(&shutter_pm(0, false)).unwrap() > 1.0 - 1e-12);
        }
        assert!((total_probability(&outs) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn write_one_leaves_minus() {
        let outs = memory_write(&LogicalQubit::one()).unwrap();
        for o in &outs {
            assert!(o.final_state.fidelity(&shutter_pm(0, true)).unwrap() > 1.0 - 1e-12);
        }
    }

    #[test]
    fn write_port_probabilities_are_uniform_for_balanced_qubit() {
        let q = LogicalQubit::normalized(C64::new(1.0, 0.0), C64::new(0.0, 1.0)).unwrap();
        let outs = memory_write(&q).unwrap();
        for o in &outs {
            assert!((o.probability - 0.25).abs() < 1e-12);
            let a = o.record.bit("a").unwrap();
            assert!(written_shutter(&q, a).fidelity(&o.final_state).unwrap() > 1.0 - 1e-12);
        }
    }

    #[test]
    fn read_of_stored_zero_routes_per_b() {
        // stored α=1, a=0: photon is −|b⟩
        let shutter = written_shutter(&LogicalQubit::zero(), 0);
        let reads = memory_read(&shutter, 0).unwrap();
        assert_eq!(reads.len(), 2);
        for r in &reads {
            let b = r.record.bit("b").unwrap();
            let q = decode_logical(&r.final_state).unwrap();
            let expected = if b == 0 { LogicalQubit::zero() } else { LogicalQubit::one() };
            assert!(q.fidelity(&expected) > 1.0 - 1e-12);
            assert!((r.probability - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn read_of_stored_one_routes_to_flipped_b() {
        let shutter = shutter_from_pm(0, C64::new(0.0, 0.0), C64::new(-1.0, 0.0)).unwrap();
        for r in memory_read(&shutter, 1).unwrap() {
            let b = r.record.bit("b").unwrap();
            let q = decode_logical(&r.final_state).unwrap();
            let expected = if b == 0 { LogicalQubit::one() } else { LogicalQubit::zero() };
            assert!(q.fidelity(&expected) > 1.0 - 1e-12);
        }
    }

    #[test]
    fn roundtrip_basis_states() {
        for q in [LogicalQubit::zero(), LogicalQubit::one()] {
            let branches = memory_roundtrip(&q).unwrap();
            assert_eq!(branches.len(), 8);
            for br in &branches {
                assert!((br.fidelity - 1.0).abs() < 1e-12);
            }
        }
    }
}
