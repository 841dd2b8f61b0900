mod common;

use common::*;
use proptest::prelude::*;
use qshutter_core::protocols::{
    cnot_protocol, cnot_target, decode_logical, derive_branch_corrections, encode_logical, memory_read,
    memory_roundtrip, memory_roundtrip_with, memory_write, port_hadamard, run_cnot, shutter_pm, store_pair,
    stored_pair_state, total_probability, written_shutter, LogicalQubit, PairBranch, TwoQubitState,
};
use qshutter_core::shutter::{ideal_gate_table2, photon_basis, realized_gate, tuned_theta, PairResponse};
use qshutter_core::{Operator, C64};

fn sign(bit: u8) -> f64 {
    if bit == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Photon pair state expected in each shutter branch, amplitudes on
/// `(|00⟩, |01⟩, |10⟩, |11⟩)` before normalization.
fn branch_display(branch: PairBranch, q: &TwoQubitState, a1: u8, a2: u8) -> [C64; 4] {
    let [al, be, ga, de] = q.amps;
    let (s1, s2, s12) = (sign(a1), sign(a2), sign(a1) * sign(a2));
    match branch {
        PairBranch::PlusPlus => [al * s12, -be * s2, -de * s1, ga],
        PairBranch::PlusMinus => [-be * s2, al * s12, ga, -de * s1],
        // the β term enters with `+`: the interaction state above the display
        // gives `(−1)^{a₂}α|−⟩ − (−1)^{a₁+a₂}β|+⟩` on the target shutter
        PairBranch::MinusPlus => [-ga * s1, de, be * s12, -al * s2],
        PairBranch::MinusMinus => [de, -ga * s1, -al * s2, be * s12],
    }
}

fn equal_up_to_phase(a: &[C64], b: &[C64], tol: f64) -> bool {
    let na = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let nb = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let overlap: C64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    if overlap.norm() < 1e-15 {
        return false;
    }
    let phase = overlap / overlap.norm();
    a.iter().zip(b).all(|(x, y)| (x * phase / na - y / nb).norm() < tol)
}

#[test]
fn encoded_basis_states_are_orthonormal() {
    let z = encode_logical(&LogicalQubit::zero(), 0);
    let o = encode_logical(&LogicalQubit::one(), 0);
    assert!((z.norm_sqr() - 1.0).abs() < 1e-12 && (o.norm_sqr() - 1.0).abs() < 1e-12);
    assert!(z.inner(&o).unwrap().norm() < 1e-12);
    assert!(shutter_pm(0, false).inner(&shutter_pm(0, true)).unwrap().norm() < 1e-12);
}

#[test]
fn port_mixer_is_an_involution() {
    let h = port_hadamard(0);
    assert!(h.is_unitary(1e-12));
    assert!((&h * &h).approx_eq(&Operator::identity(photon_basis(0)), 1e-12));
}

#[test]
fn balanced_write_spreads_ports_evenly() {
    let q = LogicalQubit::normalized(c(1.0, 0.0), c(-1.0, 0.0)).unwrap();
    let outs = memory_write(&q).unwrap();
    assert_eq!(outs.len(), 4);
    for o in &outs {
        assert!((o.probability - 0.25).abs() < 1e-12);
    }
}

#[test]
fn write_examples() {
    for o in memory_write(&LogicalQubit::zero()).unwrap() {
        assert!(o.final_state.equals_up_to_phase(&shutter_pm(0, false), 1e-12));
    }
    for o in memory_write(&LogicalQubit::one()).unwrap() {
        assert!(o.final_state.equals_up_to_phase(&shutter_pm(0, true), 1e-12));
    }
}

#[test]
fn read_examples() {
    for r in memory_read(&written_shutter(&LogicalQubit::zero(), 0), 0).unwrap() {
        let b = r.record.bit("b").unwrap();
        let q = decode_logical(&r.final_state).unwrap();
        assert!(q.fidelity(&if b == 0 { LogicalQubit::zero() } else { LogicalQubit::one() }) > 1.0 - 1e-12);
    }
    for a in 0..2 {
        let reads = memory_read(&written_shutter(&LogicalQubit::one(), a), a).unwrap();
        assert!((total_probability(&reads) - 1.0).abs() < 1e-12);
        for r in reads {
            let b = r.record.bit("b").unwrap();
            let q = decode_logical(&r.final_state).unwrap();
            assert!(q.fidelity(&if b == 0 { LogicalQubit::one() } else { LogicalQubit::zero() }) > 1.0 - 1e-12);
        }
    }
}

#[test]
fn read_branch_contract() {
    let mut r = rng(11);
    for _ in 0..20 {
        let q = random_qubit(&mut r);
        for a in 0..2u8 {
            for read in memory_read(&written_shutter(&q, a), a).unwrap() {
                let b = read.record.bit("b").unwrap();
                let photon = decode_logical(&read.final_state).unwrap();
                // −(−1)ᵃα|b⟩ + β|b⊕1⟩
                let mut expected = [c(0.0, 0.0); 2];
                expected[b as usize] = -q.alpha * sign(a);
                expected[(b ^ 1) as usize] = q.beta;
                assert!(equal_up_to_phase(&[photon.alpha, photon.beta], &expected, 1e-12));
            }
        }
    }
}

#[test]
fn memory_roundtrip_on_seeded_qubits() {
    let mut r = rng(2024);
    for _ in 0..100 {
        let q = random_qubit(&mut r);
        let branches = memory_roundtrip(&q).unwrap();
        assert_eq!(branches.len(), 8);
        let total: f64 = branches.iter().map(|b| b.probability).sum();
        assert!((total - 1.0).abs() < 1e-12);
        for b in branches {
            assert!((b.fidelity - 1.0).abs() < 1e-12, "{:?}", b.record);
            assert!((b.write_fidelity - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn stored_pair_matches_two_writes() {
    let mut r = rng(5);
    for _ in 0..5 {
        let q = random_pair(&mut r);
        let outs = store_pair(&q).unwrap();
        assert!((total_probability(&outs) - 1.0).abs() < 1e-12);
        for o in outs {
            let (a1, a2) = (o.record.bit("a1").unwrap(), o.record.bit("a2").unwrap());
            assert!(stored_pair_state(&q, a1, a2).fidelity(&o.final_state).unwrap() > 1.0 - 1e-12);
        }
    }
}

#[test]
fn cnot_branch_states_follow_display() {
    let mut r = rng(99);
    for _ in 0..10 {
        let q = random_pair(&mut r);
        for a1 in 0..2 {
            for a2 in 0..2 {
                let outs = cnot_protocol(&q, a1, a2).unwrap();
                assert_eq!(outs.len(), 4);
                assert!((total_probability(&outs) - 1.0).abs() < 1e-12);
                for o in outs {
                    let branch = PairBranch::from_label(o.record.label("branch").unwrap()).unwrap();
                    let expected = branch_display(branch, &q, a1, a2);
                    assert!(
                        equal_up_to_phase(o.final_state.amplitudes(), &expected, 1e-12),
                        "{branch} a1={a1} a2={a2}"
                    );
                    assert!((o.probability - 0.25).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn plus_plus_display_is_entrywise_exact() {
    let q = TwoQubitState::normalized([c(0.1, 0.2), c(-0.4, 0.3), c(0.5, -0.1), c(0.2, 0.6)]).unwrap();
    for a1 in 0..2 {
        for a2 in 0..2 {
            let o = cnot_protocol(&q, a1, a2)
                .unwrap()
                .into_iter()
                .find(|o| o.record.label("branch") == Some("++"))
                .unwrap();
            let expected = branch_display(PairBranch::PlusPlus, &q, a1, a2);
            for (x, y) in o.final_state.amplitudes().iter().zip(expected) {
                assert!((x - y).norm() < 1e-12, "a1={a1} a2={a2}: {x} vs {y}");
            }
        }
    }
}

#[test]
fn correction_examples() {
    let pp = derive_branch_corrections(PairBranch::PlusPlus, 0, 0).unwrap();
    assert!(!pp.flip_control && !pp.flip_target);
    assert_eq!(pp.signs, [1, -1, -1, 1]);
    let mm = derive_branch_corrections(PairBranch::MinusMinus, 0, 0).unwrap();
    assert!(mm.flip_control);
    for branch in PairBranch::ALL {
        for a1 in 0..2 {
            for a2 in 0..2 {
                let corr = derive_branch_corrections(branch, a1, a2).unwrap();
                assert_eq!(corr.signs[0], 1);
            }
        }
    }
}

#[test]
fn cnot_fixes_zero_zero() {
    for a1 in 0..2 {
        for a2 in 0..2 {
            for b in run_cnot(&TwoQubitState::basis_state(0), a1, a2).unwrap() {
                assert!((b.corrected.fidelity(&TwoQubitState::basis_state(0)) - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn cnot_on_basis_and_seeded_inputs() {
    let mut r = rng(31337);
    let inputs: Vec<TwoQubitState> =
        (0..4).map(TwoQubitState::basis_state).chain((0..50).map(|_| random_pair(&mut r))).collect();
    for q in &inputs {
        let target = cnot_target(q);
        for a1 in 0..2 {
            for a2 in 0..2 {
                let branches = run_cnot(q, a1, a2).unwrap();
                let total: f64 = branches.iter().map(|b| b.probability).sum();
                assert!((total - 1.0).abs() < 1e-12);
                for b in branches {
                    assert!((b.fidelity - 1.0).abs() < 1e-12, "{} a1={a1} a2={a2}", b.branch);
                    assert!(equal_up_to_phase(&b.corrected.amps, &target.amps, 1e-12));
                }
            }
        }
    }
}

#[test]
fn realized_gate_degrades_memory_gracefully() {
    let q = LogicalQubit::normalized(c(0.6, 0.1), c(-0.3, 0.7)).unwrap();
    let (mut last_success, mut last_fidelity) = (0.0, 0.0);
    for n in [5, 21, 101, 401] {
        let g = realized_gate(tuned_theta(n), n).unwrap();
        let branches = memory_roundtrip_with(&q, &g.response).unwrap();
        let success: f64 = branches.iter().map(|b| b.probability).sum();
        let worst = branches.iter().map(|b| b.fidelity).fold(1.0, f64::min);
        assert!(success < 1.0 && success > last_success, "N={n}: {success}");
        assert!(worst < 1.0 && worst > last_fidelity, "N={n}: {worst}");
        (last_success, last_fidelity) = (success, worst);
    }
    assert!(last_fidelity > 0.999);
    let ideal = memory_roundtrip_with(&q, &PairResponse::table2()).unwrap();
    assert!((ideal.iter().map(|b| b.probability).sum::<f64>() - 1.0).abs() < 1e-12);
    assert!(ideal_gate_table2().is_lossless());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn write_contract_holds(seed in any::<u64>()) {
        let q = random_qubit(&mut rng(seed));
        let outs = memory_write(&q).unwrap();
        prop_assert!((total_probability(&outs) - 1.0).abs() < 1e-12);
        for o in outs {
            let a = o.record.bit("a").unwrap();
            prop_assert!(written_shutter(&q, a).fidelity(&o.final_state).unwrap() > 1.0 - 1e-12);
        }
    }

    #[test]
    fn cnot_branches_complete(seed in any::<u64>(), a1 in 0u8..2, a2 in 0u8..2) {
        let q = random_pair(&mut rng(seed));
        let outs = cnot_protocol(&q, a1, a2).unwrap();
        prop_assert!((total_probability(&outs) - 1.0).abs() < 1e-12);
    }
}
