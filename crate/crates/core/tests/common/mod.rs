//! Helpers shared by the integration tests: seeded random inputs and
//! plain-array reference computations that do not go through `Operator`.
#![allow(dead_code)]

use qshutter_core::protocols::{LogicalQubit, TwoQubitState};
use qshutter_core::{Basis, Operator, PureState, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const THETA_GRID: [f64; 4] = [
    std::f64::consts::PI / 48.0,
    std::f64::consts::PI / 10.0,
    std::f64::consts::PI / 6.0,
    std::f64::consts::PI / 4.0,
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut impl Rng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_amplitudes(rng: &mut impl Rng, dim: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| random_complex(rng)).collect();
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-3 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

pub fn random_state(rng: &mut impl Rng, basis: Basis) -> PureState {
    let amps = random_amplitudes(rng, basis.dim());
    PureState::new(basis, amps).unwrap()
}

pub fn random_qubit(rng: &mut impl Rng) -> LogicalQubit {
    let v = random_amplitudes(rng, 2);
    LogicalQubit::normalized(v[0], v[1]).unwrap()
}

pub fn random_pair(rng: &mut impl Rng) -> TwoQubitState {
    let v = random_amplitudes(rng, 4);
    TwoQubitState::normalized([v[0], v[1], v[2], v[3]]).unwrap()
}

/// Haar-ish unitary: Gram-Schmidt on the columns of a random complex matrix.
pub fn random_unitary(rng: &mut impl Rng, basis: Basis) -> Operator {
    let n = basis.dim();
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<C64> = (0..n).map(|_| random_complex(rng)).collect();
        for c in &cols {
            let p: C64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(c) {
                *x -= p * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    Operator::from_fn(basis, |r, c| cols[c][r])
}

pub type Mat = Vec<Vec<C64>>;

pub fn to_rows(op: &Operator) -> Mat {
    let n = op.dim();
    (0..n).map(|r| (0..n).map(|c| op.get(r, c)).collect()).collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n)
        .map(|r| (0..n).map(|c| (0..n).map(|k| a[r][k] * b[k][c]).sum()).collect())
        .collect()
}

/// `aⁿ` by repeated multiplication on plain arrays.
pub fn naive_power(a: &Mat, n: u32) -> Mat {
    let dim = a.len();
    let mut out: Mat = (0..dim)
        .map(|r| (0..dim).map(|c| if r == c { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }).collect())
        .collect();
    for _ in 0..n {
        out = mat_mul(&out, a);
    }
    out
}

pub fn max_diff(op: &Operator, m: &Mat) -> f64 {
    let mut worst: f64 = 0.0;
    for (r, row) in m.iter().enumerate() {
        for (c, z) in row.iter().enumerate() {
            worst = worst.max((op.get(r, c) - z).norm());
        }
    }
    worst
}

/// `1 − cos^{2N} θ` accumulated cycle by cycle: the photon survives the first
/// `k−1` cycles with `cos²θ` each and is absorbed in cycle `k` with `sin²θ`.
pub fn explosion_by_cycles(theta: f64, cycles: u32) -> f64 {
    let (s2, c2) = (theta.sin().powi(2), theta.cos().powi(2));
    let mut alive = 1.0;
    let mut exploded = 0.0;
    for _ in 0..cycles {
        exploded += alive * s2;
        alive *= c2;
    }
    exploded
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
