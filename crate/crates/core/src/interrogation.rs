//! Single-interferometer Zeno interrogation of an absorbing object.
//!
//! Each cycle the photon passes a polarization rotator and then a polarizing
//! interferometer whose V arm contains the (possibly absent) object. With the
//! object present the V component is absorbed and the survivor is projected
//! back onto `|H⟩`; without it the cycles compose to a rotation by `Nθ`.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;


use crate::quantum::{
    computational_projectors, diagonal_projector, measure, Basis, Branch, BranchState,
    ClassicalValue, Operator, PortLabel, PureState, Record, C64,
};
use crate::{Error, Result};
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// The `(H, V)` polarization basis.
pub fn polarization_basis() -> Basis {
    Basis::new([PortLabel::H, PortLabel::V]).expect("distinct labels")
}

/// Polarization rotator with rows `(cos θ, sin θ; −sin θ, cos θ)`.
pub fn rotation(theta: f64) -> Operator {
    let (s, c) = theta.sin_cos();
    Operator::from_real_rows(polarization_basis(), &[&[c, s], &[-s, c]]).expect("2x2")
}

/// `rotation(θ)ⁿ` from the rank-one spectral form
/// `e^{inθ} P₊ + e^{−inθ} P₋` with `P± = ½ (1, ±i)ᵀ(1, ∓i)`.
pub fn rotation_power_closed(theta: f64, n: u32) -> Operator {
    let phase = C64::from_polar(1.0, n as f64 * theta);
    let i = C64::new(0.0, 1.0);
    let half = C64::new(0.5, 0.0);
    let plus = [[half, -i * half], [i * half, half]];
    let minus = [[half, i * half], [-i * half, half]];
    Operator::from_fn(polarization_basis(), |r, c| {
        phase * plus[r][c] + phase.conj() * minus[r][c]
    })
}

/// The rotation angle `π/(2N)` that carries `|H⟩` to `|V⟩` in `N` empty cycles.
pub fn optimal_theta(cycles: u32) -> Result<f64> {
    if cycles < 1 {
        return Err(Error::InvalidCycles);
    }
    Ok(FRAC_PI_2 / cycles as f64)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterrogationConfig {
    pub theta: f64,
    pub cycles: u32,
    pub bomb_present: bool,
}

impl InterrogationConfig {
    pub fn new(theta: f64, cycles: u32, bomb_present: bool) -> Result<Self> {
        if !theta.is_finite() || theta <= 0.0 {
            return Err(Error::InvalidTheta(theta));
        }
        if cycles < 1 {
            return Err(Error::InvalidCycles);
        }
        Ok(InterrogationConfig { theta, cycles, bomb_present })
    }

    /// `θ = π/(2N)`.
    pub fn optimal(cycles: u32, bomb_present: bool) -> Result<Self> {
        InterrogationConfig::new(optimal_theta(cycles)?, cycles, bomb_present)
    }
}

#[derive(Clone, Debug)]
pub struct InterrogationResult {
    /// Exact cumulative absorption probability, summed over the per-cycle
    /// absorption branches.
    pub explosion_probability: f64,
    /// `sin^{2N} θ`, the product of per-cycle absorption probabilities. Kept
    /// for comparison only; it is not the probability of any event here.
    pub sin_power_estimate: f64,
    /// One absorbed branch per cycle (record `cycle`).
    pub absorption_branches: Vec<Branch>,
    /// Final polarization measurement of the surviving photon, `H` then `V`.
    pub surviving_branches: Vec<Branch>,
}

impl InterrogationResult {
    pub fn survival_probability(&self) -> f64 {
        self.surviving_branches.iter().map(|b| b.probability).sum()
    }

    pub fn output_probability(&self, label: PortLabel) -> f64 {
        self.surviving_branches
            .iter()
            .find(|b| b.record.label("outcome") == Some(label.as_str()))
            .map_or(0.0, |b| b.probability)
    }
}

/// Interrogate with the photon entering in `|H⟩`.
pub fn interrogate(cfg: &InterrogationConfig) -> Result<InterrogationResult> {
    interrogate_from(cfg, &PureState::basis_state(polarization_basis(), 0))
}

/// Interrogate with an arbitrary input polarization.
pub fn interrogate_from(cfg: &InterrogationConfig, input: &PureState) -> Result<InterrogationResult> {
    let basis = polarization_basis();
    let sin_power_estimate = cfg.theta.sin().powi(2 * cfg.cycles as i32);
    let mut absorption_branches = Vec::new();
    let output = if cfg.bomb_present {
        let rot = rotation(cfg.theta);
        let object = [
            ("survive".into(), diagonal_projector(&basis, |k| k == 0)),
            ("absorb".into(), diagonal_projector(&basis, |k| k == 1)),
        ];
        let mut current = Some(input.clone());
        for cycle in 1..=cfg.cycles {
            let Some(state) = current.take() else {
                absorption_branches.push(Branch::absorbed(cycle_record(cycle), 0.0));
                continue;
            };
            let rotated = rot.apply(&state)?;
            let mut split = measure(&rotated, &object)?;
            let absorbed = split.pop().expect("two outcomes");
            let survived = split.pop().expect("two outcomes");
            absorption_branches.push(Branch::absorbed(cycle_record(cycle), absorbed.probability));
            current = match survived.state {
                BranchState::Pure(s) => Some(s),
                _ => None,
            };
        }
        current
    } else {
        Some(rotation_power_closed(cfg.theta, cfg.cycles).apply(input)?)
    };
    let surviving_branches = match output {
        Some(s) => measure(&s, &computational_projectors(&basis))?,
        None => ["H", "V"]
            .into_iter()
            .map(|l| Branch {
                record: Record::new().with("outcome", ClassicalValue::Label(l.into())),
                probability: 0.0,
                state: BranchState::Unset,
            })
            .collect(),
    };
    let explosion_probability = absorption_branches.iter().map(|b| b.probability).sum();
    Ok(InterrogationResult {
        explosion_probability,
        sin_power_estimate,
        absorption_branches,
        surviving_branches,
    })
}

fn cycle_record(cycle: u32) -> Record {
    Record::new().with("cycle", ClassicalValue::Count(cycle))
}
