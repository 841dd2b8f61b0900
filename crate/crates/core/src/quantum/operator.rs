use alloc::string::ToString;
use alloc::vec::Vec;
use core::ops::Mul;


use super::{Basis, PureState, C64};
use crate::{Error, Result};
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// Square complex matrix over a labelled basis, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    basis: Basis,
    data: Vec<C64>,
}

pub(crate) fn basis_mismatch(expected: &Basis, found: &Basis) -> Error {
    Error::BasisMismatch { expected: expected.describe(), found: found.describe() }
}

impl Operator {
    pub fn new(basis: Basis, data: Vec<C64>) -> Result<Self> {
        let n = basis.dim();
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: data.len() });
        }
        if data.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Operator { basis, data })
    }

    /// Real matrix from rows; convenient for the rotator/permutation matrices.
    pub fn from_real_rows(basis: Basis, rows: &[&[f64]]) -> Result<Self> {
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| C64::new(x, 0.0))).collect();
        Operator::new(basis, data)
    }

    pub fn from_fn(basis: Basis, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let n = basis.dim();
        let data = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Operator { basis, data }
    }

    pub fn identity(basis: Basis) -> Self {
        Operator::from_fn(basis, |r, c| if r == c { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn zeros(basis: Basis) -> Self {
        Operator::from_fn(basis, |_, _| C64::new(0.0, 0.0))
    }

    /// `|v⟩⟨v|` for a (not necessarily normalized) amplitude vector.
    pub fn outer(basis: Basis, ket: &[C64], bra: &[C64]) -> Result<Self> {
        let n = basis.dim();
        if ket.len() != n || bra.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: ket.len().min(bra.len()) });
        }
        Ok(Operator::from_fn(basis, |r, c| ket[r] * bra[c].conj()))
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim() + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        let n = self.dim();
        self.data[row * n + col] = value;
    }

    pub fn column(&self, col: usize) -> Vec<C64> {
        (0..self.dim()).map(|r| self.get(r, col)).collect()
    }

    pub fn adjoint(&self) -> Operator {
        Operator::from_fn(self.basis.clone(), |r, c| self.get(c, r).conj())
    }

    pub fn scale(&self, s: C64) -> Operator {
        Operator { basis: self.basis.clone(), data: self.data.iter().map(|&z| z * s).collect() }
    }

    fn check_same_basis(&self, other: &Operator) -> Result<()> {
        if self.basis != other.basis {
            return Err(basis_mismatch(&self.basis, &other.basis));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Operator) -> Result<Operator> {
        self.check_same_basis(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Operator { basis: self.basis.clone(), data })
    }

    pub fn checked_sub(&self, other: &Operator) -> Result<Operator> {
        self.check_same_basis(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Operator { basis: self.basis.clone(), data })
    }

    /// Matrix product `self · other`.
    pub fn checked_mul(&self, other: &Operator) -> Result<Operator> {
        self.check_same_basis(other)?;
        let n = self.dim();
        let mut data = alloc::vec![C64::new(0.0, 0.0); n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    data[r * n + c] += a * other.data[k * n + c];
                }
            }
        }
        if data.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Operator { basis: self.basis.clone(), data })
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Operator) -> Result<f64> {
        self.check_same_basis(other)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &Operator, tol: f64) -> bool {
        self.max_abs_diff(other).map(|d| d <= tol).unwrap_or(false)
    }

    /// Largest entrywise deviation of `U†U` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = &self.adjoint() * self;
        prod.max_abs_diff(&Operator::identity(self.basis.clone())).unwrap_or(f64::INFINITY)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.approx_eq(&self.adjoint(), tol)
    }

    /// `U U† = U† U` within `tol`.
    pub fn is_normal(&self, tol: f64) -> bool {
        let adj = self.adjoint();
        (self * &adj).approx_eq(&(&adj * self), tol)
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Induced 2-norm, by power iteration on `A†A`.
    pub fn spectral_norm(&self) -> f64 {
        let gram = &self.adjoint() * self;
        let n = self.dim();
        let mut v: Vec<C64> = (0..n).map(|k| C64::new(1.0 + k as f64 * 0.1, 0.3)).collect();
        let mut lambda = 0.0;
        for _ in 0..500 {
            let w = mat_vec(&gram.data, n, &v);
            let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            let next = norm / v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v = w.into_iter().map(|z| z / norm).collect();
            if (next - lambda).abs() <= 1e-15 * next {
                lambda = next;
                break;
            }
            lambda = next;
        }
        lambda.sqrt()
    }

    /// Kronecker product, `self` outer.
    pub fn tensor(&self, other: &Operator) -> Result<Operator> {
        let basis = self.basis.tensor(&other.basis)?;
        let m = other.dim();
        Ok(Operator::from_fn(basis, |r, c| self.get(r / m, c / m) * other.get(r % m, c % m)))
    }

    /// Matrix-vector product. The weight is carried over; the result is not
    /// renormalized, so a non-unitary operator surfaces as a norm error.
    pub fn apply(&self, state: &PureState) -> Result<PureState> {
        if &self.basis != state.basis() {
            return Err(basis_mismatch(&self.basis, state.basis()));
        }
        let amps = mat_vec(&self.data, self.dim(), state.amplitudes());
        if amps.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite);
        }
        PureState::with_weight(self.basis.clone(), amps, state.weight())
    }

    /// Apply a contraction (e.g. a post-selected lossy device): the squared
    /// norm of the image moves into the branch weight. Returns `None` when
    /// the image vanishes.
    pub fn apply_postselected(&self, state: &PureState) -> Result<Option<PureState>> {
        if &self.basis != state.basis() {
            return Err(basis_mismatch(&self.basis, state.basis()));
        }
        let amps = mat_vec(&self.data, self.dim(), state.amplitudes());
        if amps.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(PureState::from_unnormalized(self.basis.clone(), amps, state.weight()))
    }

    /// `n`-fold repeated product; `U⁰ = I`.
    pub fn matrix_power_direct(&self, n: u32) -> Operator {
        let mut acc = Operator::identity(self.basis.clone());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Embed this operator into a larger basis that contains each of its
    /// factors (in any order), acting as the identity on the rest.
    pub fn lift(&self, target: &Basis) -> Result<Operator> {
        if &self.basis == target {
            return Ok(self.clone());
        }
        let positions: Vec<usize> = self
            .basis
            .factors()
            .iter()
            .map(|f| {
                target.factor_position(f).ok_or_else(|| Error::UnknownLabel(f[0].to_string()))
            })
            .collect::<Result<_>>()?;
        let n = target.dim();
        let digits: Vec<Vec<usize>> = (0..n).map(|i| target.decompose(i)).collect();
        let local: Vec<usize> = digits
            .iter()
            .map(|d| {
                let own: Vec<usize> = positions.iter().map(|&p| d[p]).collect();
                self.basis.compose(&own)
            })
            .collect();
        let zero = C64::new(0.0, 0.0);
        Ok(Operator::from_fn(target.clone(), |r, c| {
            let spectator_match = digits[r]
                .iter()
                .zip(&digits[c])
                .enumerate()
                .all(|(k, (a, b))| positions.contains(&k) || a == b);
            if spectator_match {
                self.get(local[r], local[c])
            } else {
                zero
            }
        }))
    }

    /// Same operator expressed in a basis whose factors are a permutation of ours.
    pub fn reorder(&self, target: &Basis) -> Result<Operator> {
        if !self.basis.is_permutation_of(target) {
            return Err(basis_mismatch(&self.basis, target));
        }
        self.lift(target)
    }
}

pub(crate) fn mat_vec(data: &[C64], n: usize, v: &[C64]) -> Vec<C64> {
    (0..n)
        .map(|r| data[r * n..(r + 1) * n].iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

impl Mul<&Operator> for &Operator {
    type Output = Operator;

    /// # Panics
    /// On mismatched bases; use [`Operator::checked_mul`] to get an error instead.
    fn mul(self, rhs: &Operator) -> Operator {
        self.checked_mul(rhs).expect("operator product")
    }
}
