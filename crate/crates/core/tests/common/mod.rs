//! Oracles and generators shared by the integration tests. Everything here
//! uses nalgebra's own Hermitian eigensolver so that residuals are checked
//! independently of the crate's Jacobi implementation.

#![allow(dead_code)]

use maxconf::linalg::{CMatrix, CVector, HermitianOperator, C64};
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Eigenvalues via nalgebra, ascending.
pub fn eigenvalues(m: &CMatrix) -> Vec<f64> {
    let h = (m + m.adjoint()) * c(0.5);
    let mut v: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

pub fn min_eig(m: &CMatrix) -> f64 {
    eigenvalues(m)[0]
}

/// Spectral norm via singular values.
pub fn norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

pub fn trace(m: &CMatrix) -> f64 {
    m.trace().re
}

pub fn rank(m: &CMatrix, rel: f64) -> usize {
    let ev = eigenvalues(m);
    let scale = ev.iter().fold(1.0_f64, |a, x| a.max(x.abs()));
    ev.iter().filter(|&&x| x > rel * scale).count()
}

pub fn sandwich(a: &CMatrix, b: &CMatrix) -> CMatrix {
    b * a * b
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Normalised random coefficients with every modulus above `floor`.
pub fn random_coefficients(rng: &mut ChaCha8Rng, d: usize, floor: f64) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..d).map(|_| random_complex(rng)).collect();
        let n: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let v: Vec<C64> = v.iter().map(|x| x / n).collect();
        if v.iter().all(|x| x.norm() > floor) {
            return v;
        }
    }
}

/// Flat coefficients `e^{i phi_l} / sqrt(d)` with random phases.
pub fn random_flat(rng: &mut ChaCha8Rng, d: usize) -> Vec<C64> {
    (0..d).map(|_| C64::from_polar(1.0 / (d as f64).sqrt(), rng.gen_range(0.0..std::f64::consts::TAU))).collect()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| random_complex(rng))
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    let a = random_matrix(rng, d, d);
    (&a + a.adjoint()) * c(0.5)
}

/// Random density operator of the given rank.
pub fn random_density(rng: &mut ChaCha8Rng, d: usize, rank: usize) -> HermitianOperator {
    let g = random_matrix(rng, d, rank);
    let m = &g * g.adjoint();
    let t = m.trace().re;
    HermitianOperator::new(m / c(t)).unwrap()
}

pub fn random_unitary(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    random_matrix(rng, d, d).qr().q()
}

pub fn random_priors(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.iter().map(|x| x / s).collect()
}

pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

/// Orthonormal basis of the range of a PSD matrix (nalgebra eigensolver).
pub fn range_basis(m: &CMatrix, rel: f64) -> CMatrix {
    let h = (m + m.adjoint()) * c(0.5);
    let eig = h.symmetric_eigen();
    let scale = eig.eigenvalues.iter().fold(1.0_f64, |a, x| a.max(x.abs()));
    let cols: Vec<CVector> = (0..eig.eigenvalues.len())
        .filter(|&k| eig.eigenvalues[k] > rel * scale)
        .map(|k| eig.eigenvectors.column(k).into_owned())
        .collect();
    if cols.is_empty() {
        CMatrix::zeros(m.nrows(), 0)
    } else {
        CMatrix::from_columns(&cols)
    }
}

/// Real matrix of a linear map from Hermitian `d x d` matrices (in the basis
/// `E_kk`, `(E_kl + E_lk)/sqrt2`, `i(E_kl - E_lk)/sqrt2`) to stacked complex outputs.
pub fn hermitian_map_matrix(d: usize, f: impl Fn(&CMatrix) -> Vec<CMatrix>) -> (DMatrix<f64>, Vec<CMatrix>) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut basis = Vec::new();
    for k in 0..d {
        let mut m = CMatrix::zeros(d, d);
        m[(k, k)] = c(1.0);
        basis.push(m);
    }
    for k in 0..d {
        for l in k + 1..d {
            let mut s = CMatrix::zeros(d, d);
            s[(k, l)] = c(h);
            s[(l, k)] = c(h);
            basis.push(s);
            let mut a = CMatrix::zeros(d, d);
            a[(k, l)] = C64::new(0.0, h);
            a[(l, k)] = C64::new(0.0, -h);
            basis.push(a);
        }
    }
    let cols: Vec<Vec<f64>> = basis
        .iter()
        .map(|b| f(b).iter().flat_map(|m| m.iter().flat_map(|x| [x.re, x.im]).collect::<Vec<_>>()).collect())
        .collect();
    let rows = cols[0].len();
    (DMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i]), basis)
}
