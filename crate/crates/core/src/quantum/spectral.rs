//! Eigendecomposition of normal matrices and spectral matrix powers.
//!
//! A normal `U` is diagonalized through the Hermitian matrix
//! `M = (U + U†)/2 + κ (U − U†)/2i`, which shares U's eigenvectors. `M` is
//! diagonalized with cyclic complex Jacobi rotations and the eigenvalues of
//! `U` are read off as Rayleigh quotients. If two distinct eigenvalues of `U`
//! happen to map to the same eigenvalue of `M`, the check `V†UV = Λ` fails and
//! another `κ` is tried.
//!
//! 2×2 matrices use the closed-form characteristic polynomial instead.

use alloc::vec::Vec;


use super::{Operator, C64};
use crate::{Error, Result, OPERATOR_TOL};
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// Eigenvalues and orthonormal eigenvectors (columns of `vectors`).
#[derive(Clone, Debug)]
pub struct Eigensystem {
    pub values: Vec<C64>,
    pub vectors: Operator,
}

impl Eigensystem {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// `Σ f(λᵢ) |eᵢ⟩⟨eᵢ|`.
    pub fn reconstruct(&self, f: impl Fn(C64) -> C64) -> Operator {
        let n = self.values.len();
        let fl: Vec<C64> = self.values.iter().map(|&l| f(l)).collect();
        Operator::from_fn(self.vectors.basis().clone(), |r, c| {
            (0..n).map(|k| fl[k] * self.vectors.get(r, k) * self.vectors.get(c, k).conj()).sum()
        })
    }
}

const MIXING: [f64; 4] = [0.618_033_988_749_894_9, 0.414_213_562_373_095, 1.324_717_957_244_746, 0.2718281828];

/// Eigendecomposition of a normal operator.
pub fn eigen_normal(u: &Operator) -> Result<Eigensystem> {
    if !u.is_normal(OPERATOR_TOL) {
        return Err(Error::NotNormal);
    }
    if u.dim() == 2 {
        return eigen_2x2(u);
    }
    let adj = u.adjoint();
    let half = C64::new(0.5, 0.0);
    let herm = u.checked_add(&adj)?.scale(half);
    let anti = u.checked_sub(&adj)?.scale(C64::new(0.0, -0.5));
    for kappa in MIXING {
        let m = herm.checked_add(&anti.scale(C64::new(kappa, 0.0)))?;
        let vectors = hermitian_jacobi(&m)?;
        let d = &(&vectors.adjoint() * u) * &vectors;
        let n = u.dim();
        let scale = u.frobenius_norm().max(1.0);
        let off = (0..n)
            .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| d.get(r, c).norm())
            .fold(0.0, f64::max);
        if off <= 1e-11 * scale {
            let values = (0..n).map(|k| d.get(k, k)).collect();
            return Ok(Eigensystem { values, vectors });
        }
    }
    Err(Error::EigenFailure)
}

fn eigen_2x2(u: &Operator) -> Result<Eigensystem> {
    let (a, b, c, d) = (u.get(0, 0), u.get(0, 1), u.get(1, 0), u.get(1, 1));
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - det * 4.0).sqrt();
    let l1 = (tr + disc) * 0.5;
    let l2 = (tr - disc) * 0.5;
    let scale = u.frobenius_norm().max(1.0);
    let basis = u.basis().clone();
    if (l1 - l2).norm() <= 1e-14 * scale {
        // normal with a double eigenvalue: scalar multiple of the identity
        return Ok(Eigensystem { values: alloc::vec![l1, l2], vectors: Operator::identity(basis) });
    }
    let vec_for = |l: C64| -> [C64; 2] {
        let cand1 = [b, l - a];
        let cand2 = [l - d, c];
        let n1 = cand1[0].norm_sqr() + cand1[1].norm_sqr();
        let n2 = cand2[0].norm_sqr() + cand2[1].norm_sqr();
        let (v, n) = if n1 >= n2 { (cand1, n1) } else { (cand2, n2) };
        let n = n.sqrt();
        [v[0] / n, v[1] / n]
    };
    let v1 = vec_for(l1);
    // orthogonal complement keeps the basis exactly orthonormal
    let v2 = [-v1[1].conj(), v1[0].conj()];
    let vectors = Operator::new(basis, alloc::vec![v1[0], v2[0], v1[1], v2[1]])?;
    let l2 = (0..2)
        .map(|r| v2[r].conj() * (0..2).map(|c| u.get(r, c) * v2[c]).sum::<C64>())
        .sum();
    Ok(Eigensystem { values: alloc::vec![l1, l2], vectors })
}

/// Cyclic Jacobi for a Hermitian matrix; returns the unitary whose columns
/// are eigenvectors.
fn hermitian_jacobi(m: &Operator) -> Result<Operator> {
    let n = m.dim();
    let mut a: Vec<C64> = m.data().to_vec();
    let mut v: Vec<C64> = Operator::identity(m.basis().clone()).data().to_vec();
    let total: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| r * n + c))
            .map(|k| a[k].norm_sqr())
            .sum();
        if off <= 1e-30 * total {
            return Operator::new(m.basis().clone(), v);
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                let phase = apq / mag;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                // J = diag(1, e^{-iφ}) · [[c, s], [-s, c]] in the (p, q) plane
                let jpp = C64::new(cs, 0.0);
                let jpq = C64::new(sn, 0.0);
                let jqp = phase.conj() * (-sn);
                let jqq = phase.conj() * cs;
                for k in 0..n {
                    let (x, y) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = x * jpp + y * jqp;
                    a[k * n + q] = x * jpq + y * jqq;
                    let (x, y) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = x * jpp + y * jqp;
                    v[k * n + q] = x * jpq + y * jqq;
                }
                for k in 0..n {
                    let (x, y) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = jpp.conj() * x + jqp.conj() * y;
                    a[q * n + k] = jpq.conj() * x + jqq.conj() * y;
                }
            }
        }
    }
    Err(Error::EigenFailure)
}

/// `Uⁿ = Σ λᵢⁿ |eᵢ⟩⟨eᵢ|` for a normal operator; negative `n` inverts.
pub fn spectral_power(u: &Operator, n: i32) -> Result<Operator> {
    let eig = eigen_normal(u)?;
    Ok(eig.reconstruct(|l| l.powi(n)))
}
