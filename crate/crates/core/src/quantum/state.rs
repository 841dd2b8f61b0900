use alloc::vec::Vec;


use super::operator::basis_mismatch;
use super::{Basis, Mode, C64};
use crate::{Error, Result, PROBABILITY_TOL};
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// Normalized amplitude vector plus the probability of the branch it lives on.
///
/// The vector always has unit norm; the branch probability is tracked
/// separately in `weight`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    basis: Basis,
    amps: Vec<C64>,
    weight: f64,
}

impl PureState {
    pub fn new(basis: Basis, amps: Vec<C64>) -> Result<Self> {
        PureState::with_weight(basis, amps, 1.0)
    }

    pub fn with_weight(basis: Basis, amps: Vec<C64>, weight: f64) -> Result<Self> {
        if amps.len() != basis.dim() {
            return Err(Error::DimensionMismatch { expected: basis.dim(), found: amps.len() });
        }
        if amps.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite);
        }
        let n2 = norm_sqr(&amps);
        if (n2 - 1.0).abs() > PROBABILITY_TOL {
            return Err(Error::NotNormalized(n2));
        }
        if !(0.0..=1.0 + PROBABILITY_TOL).contains(&weight) {
            return Err(Error::InvalidWeight(weight));
        }
        Ok(PureState { basis, amps, weight })
    }

    /// Normalize `amps`, folding the squared norm into the weight.
    /// `None` when the vector is (numerically) zero.
    pub fn from_unnormalized(basis: Basis, amps: Vec<C64>, weight: f64) -> Option<Self> {
        let n2 = norm_sqr(&amps);
        if n2 <= f64::MIN_POSITIVE || !n2.is_finite() {
            return None;
        }
        let n = n2.sqrt();
        Some(PureState {
            basis,
            amps: amps.into_iter().map(|z| z / n).collect(),
            weight: weight * n2,
        })
    }

    pub fn basis_state(basis: Basis, index: usize) -> Self {
        let mut amps = alloc::vec![C64::new(0.0, 0.0); basis.dim()];
        amps[index] = C64::new(1.0, 0.0);
        PureState { basis, amps, weight: 1.0 }
    }

    pub fn from_label(basis: Basis, label: &[Mode]) -> Result<Self> {
        let idx = basis
            .index_of(label)
            .ok_or_else(|| Error::UnknownLabel(alloc::format!("{:?}", label)))?;
        Ok(PureState::basis_state(basis, idx))
    }

    /// Normalized linear combination of states sharing one basis.
    pub fn superpose(terms: &[(C64, &PureState)]) -> Result<Option<PureState>> {
        let Some((_, first)) = terms.first() else {
            return Ok(None);
        };
        let mut amps = alloc::vec![C64::new(0.0, 0.0); first.basis.dim()];
        for (coef, s) in terms {
            if s.basis != first.basis {
                return Err(basis_mismatch(&first.basis, &s.basis));
            }
            for (a, b) in amps.iter_mut().zip(&s.amps) {
                *a += coef * b;
            }
        }
        Ok(PureState::from_unnormalized(first.basis.clone(), amps, 1.0).map(|s| s.reweighted(1.0)))
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, label: &[Mode]) -> Option<C64> {
        self.basis.index_of(label).map(|i| self.amps[i])
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn reweighted(mut self, weight: f64) -> Self {
        self.weight = weight;
        self
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    /// Product state, `self` outer; weights multiply.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let basis = self.basis.tensor(&other.basis)?;
        let amps = self.amps.iter().flat_map(|a| other.amps.iter().map(move |b| a * b)).collect();
        Ok(PureState { basis, amps, weight: self.weight * other.weight })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.basis != other.basis {
            return Err(basis_mismatch(&self.basis, &other.basis));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|⟨self|other⟩|²`; insensitive to global phase.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn equals_up_to_phase(&self, other: &PureState, tol: f64) -> bool {
        self.fidelity(other).map(|f| (1.0 - f).abs() <= tol).unwrap_or(false)
    }

    /// Contract the factors of `bra` against this state, `(⟨bra| ⊗ I)|self⟩`.
    /// Returns the remaining basis and the raw (unnormalized) amplitudes.
    pub fn partial_inner(&self, bra: &PureState) -> Result<(Basis, Vec<C64>)> {
        let positions: Vec<usize> = bra
            .basis
            .factors()
            .iter()
            .map(|f| self.basis.factor_position(f).ok_or_else(|| basis_mismatch(&self.basis, &bra.basis)))
            .collect::<Result<_>>()?;
        let mut rest = self.basis.clone();
        let mut sorted = positions.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        for &p in &sorted {
            rest = rest.without_factor(p).ok_or(Error::DimensionMismatch {
                expected: self.basis.factors().len() + 1,
                found: bra.basis.factors().len(),
            })?;
        }
        let mut out = alloc::vec![C64::new(0.0, 0.0); rest.dim()];
        for (i, &amp) in self.amps.iter().enumerate() {
            let digits = self.basis.decompose(i);
            let bra_digits: Vec<usize> = positions.iter().map(|&p| digits[p]).collect();
            let rest_digits: Vec<usize> = digits
                .iter()
                .enumerate()
                .filter(|(k, _)| !positions.contains(k))
                .map(|(_, &d)| d)
                .collect();
            out[rest.compose(&rest_digits)] += bra.amps[bra.basis.compose(&bra_digits)].conj() * amp;
        }
        Ok((rest, out))
    }

    /// Condition on the factors of `bra`: the normalized remainder with its
    /// squared norm folded into the weight.
    pub fn factor_out(&self, bra: &PureState) -> Result<Option<PureState>> {
        let (rest, amps) = self.partial_inner(bra)?;
        Ok(PureState::from_unnormalized(rest, amps, self.weight))
    }

    /// Same state expressed in a basis whose factors are a permutation of ours.
    pub fn reorder(&self, target: &Basis) -> Result<PureState> {
        if !self.basis.is_permutation_of(target) {
            return Err(basis_mismatch(&self.basis, target));
        }
        let amps = (0..target.dim())
            .map(|i| {
                let j = self.basis.index_of(&target.label(i)).expect("permuted basis");
                self.amps[j]
            })
            .collect();
        Ok(PureState { basis: target.clone(), amps, weight: self.weight })
    }
}

fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}
