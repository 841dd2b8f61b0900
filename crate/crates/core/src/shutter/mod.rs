//! Nested two-interferometer quantum shutter.
//!
//! Two copies of the interrogation interferometer share one object and are
//! coupled by a polarizing beam splitter that exchanges their H components.
//! Modes are ordered `(H1, V1, H2, V2)`. One cycle is `U = S · U₁` where `U₁`
//! rotates both polarizations and `S` swaps `H1 ↔ H2`.

mod gate;

pub use gate::{
    ideal_gate_table1, ideal_gate_table2, photon_basis, realized_gate, shutter_basis, PairMatrix,
    PairResponse, RealizedGate, ShutterGate,
};

use alloc::vec::Vec;


use crate::quantum::{
    diagonal_projector, eigen_normal, measure, Basis, Branch, BranchState, ClassicalValue,
    Eigensystem, Operator, PortLabel, PureState, Record, C64,
};
use crate::{Error, Result};
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// `(H1, V1, H2, V2)`.
pub fn device_basis() -> Basis {
    Basis::new([PortLabel::H1, PortLabel::V1, PortLabel::H2, PortLabel::V2]).expect("distinct labels")
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShutterCycleConfig {
    pub theta: f64,
    pub cycles: u32,
    pub particle_present: bool,
}

impl ShutterCycleConfig {
    pub fn new(theta: f64, cycles: u32, particle_present: bool) -> Result<Self> {
        if !theta.is_finite() || theta <= 0.0 {
            return Err(Error::InvalidTheta(theta));
        }
        check_odd(cycles)?;
        Ok(ShutterCycleConfig { theta, cycles, particle_present })
    }

    /// `θ = π/(N+1)`.
    pub fn tuned(cycles: u32, particle_present: bool) -> Result<Self> {
        check_odd(cycles)?;
        ShutterCycleConfig::new(tuned_theta(cycles), cycles, particle_present)
    }
}

/// The shutter's default angle `π/(N+1)`.
pub fn tuned_theta(cycles: u32) -> f64 {
    core::f64::consts::PI / (cycles as f64 + 1.0)
}

fn check_odd(cycles: u32) -> Result<()> {
    if cycles == 0 {
        Err(Error::InvalidCycles)
    } else if cycles.is_multiple_of(2) {
        Err(Error::EvenCycles(cycles))
    } else {
        Ok(())
    }
}

/// Both interferometers' rotators, block-diagonal.
pub fn build_u1(theta: f64) -> Operator {
    let (s, c) = theta.sin_cos();
    Operator::from_real_rows(
        device_basis(),
        &[&[c, s, 0.0, 0.0], &[-s, c, 0.0, 0.0], &[0.0, 0.0, c, s], &[0.0, 0.0, -s, c]],
    )
    .expect("4x4")
}

/// Beam splitter exchanging `H1` and `H2`.
pub fn pbs_swap() -> Operator {
    Operator::from_real_rows(
        device_basis(),
        &[&[0.0, 0.0, 1.0, 0.0], &[0.0, 1.0, 0.0, 0.0], &[1.0, 0.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 1.0]],
    )
    .expect("4x4")
}

/// One empty cycle, `pbs_swap · build_u1(θ)`.
pub fn build_cycle_unitary(theta: f64) -> Operator {
    &pbs_swap() * &build_u1(theta)
}

/// Numerical eigensystem of the cycle unitary; the spectrum is
/// `{e^{iθ}, e^{−iθ}, 1, −1}`.
pub fn cycle_eigensystem(theta: f64) -> Result<Eigensystem> {
    eigen_normal(&build_cycle_unitary(theta))
}

/// The eigenvectors `(1, ±i, 1, ±i)/2` of the cycle unitary for `e^{±iθ}`,
/// which are the single-interferometer eigenvectors placed symmetrically in
/// both interferometers.
pub fn rotating_eigenvectors() -> [PureState; 2] {
    let h = C64::new(0.5, 0.0);
    let i = C64::new(0.0, 0.5);
    [
        PureState::new(device_basis(), alloc::vec![h, i, h, i]).expect("normalized"),
        PureState::new(device_basis(), alloc::vec![h, -i, h, -i]).expect("normalized"),
    ]
}

/// `Uᴺ` for the empty device via the spectral decomposition (any `N`).
pub fn evolve_empty_spectral(theta: f64, cycles: i32) -> Result<Operator> {
    crate::quantum::spectral_power(&build_cycle_unitary(theta), cycles)
}

/// Closed form of `Uᴺ` for odd `N`, written with the half angles
/// `a = (N+1)θ/2` and `b = (N−1)θ/2`.
pub fn evolve_empty_closed(theta: f64, cycles: u32) -> Result<Operator> {
    check_odd(cycles)?;
    let n = cycles as f64;
    let (sa, ca) = ((n + 1.0) * theta / 2.0).sin_cos();
    let (sb, cb) = ((n - 1.0) * theta / 2.0).sin_cos();
    Operator::from_real_rows(
        device_basis(),
        &[
            &[-sa * sb, ca * sb, ca * cb, sa * cb],
            &[-sa * cb, ca * cb, -ca * sb, -sa * sb],
            &[ca * cb, sa * cb, -sa * sb, ca * sb],
            &[-ca * sb, -sa * sb, -sa * cb, ca * cb],
        ],
    )
}

/// `N → ∞` limit of the tuned empty evolution: `H1 ↦ −H1`, `H2 ↦ −H2`,
/// `V1 ↦ −V2`, `V2 ↦ −V1`.
pub fn limit_operator() -> Operator {
    Operator::from_real_rows(
        device_basis(),
        &[
            &[-1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, -1.0],
            &[0.0, 0.0, -1.0, 0.0],
            &[0.0, -1.0, 0.0, 0.0],
        ],
    )
    .expect("4x4")
}

/// Cycle-by-cycle evolution with the object present: rotate, absorb both V
/// components, swap. Returns `[absorbed, survivor]`; the absorbed branch
/// carries the cumulative absorption probability.
pub fn evolve_with_particle(cfg: &ShutterCycleConfig, input: &PureState) -> Result<Vec<Branch>> {
    let basis = device_basis();
    let u1 = build_u1(cfg.theta);
    let swap = pbs_swap();
    let object = [
        ("survive".into(), diagonal_projector(&basis, |k| k % 2 == 0)),
        ("absorb".into(), diagonal_projector(&basis, |k| k % 2 == 1)),
    ];
    let mut absorbed = 0.0;
    let mut current = Some(input.clone());
    for _ in 0..cfg.cycles {
        let Some(state) = current.take() else { break };
        let mut split = measure(&u1.apply(&state)?, &object)?;
        absorbed += split.pop().expect("two outcomes").probability;
        current = match split.pop().expect("two outcomes").state {
            BranchState::Pure(s) => Some(swap.apply(&s)?),
            _ => None,
        };
    }
    let record = |l: &str| Record::new().with("outcome", ClassicalValue::Label(l.into()));
    let survivor = match current {
        Some(s) => Branch { record: record("survive"), probability: s.weight(), state: BranchState::Pure(s) },
        None => Branch { record: record("survive"), probability: 0.0, state: BranchState::Unset },
    };
    Ok(alloc::vec![Branch::absorbed(record("absorb"), absorbed), survivor])
}

/// `1 − sin^{2N} θ`, for side-by-side comparison with the exact survival
/// probability `cos^{2N} θ` of an H input.
pub fn sin_power_survival_estimate(theta: f64, cycles: u32) -> f64 {
    1.0 - theta.sin().powi(2 * cycles as i32)
}
