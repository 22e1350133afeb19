//! Dense complex Hermitian operator calculus.
//!
//! [`HermitianOperator`] is the value type for every density operator,
//! detection operator, projector and certificate in the crate. The
//! eigensolver is a cyclic complex Jacobi iteration with a fixed sweep order,
//! so repeated calls on identical input return bit-identical spectra.
//! Eigenvectors of degenerate clusters are replaced by a canonical basis
//! (canonical unit vectors projected onto the eigenspace and orthonormalised
//! in index order), and every eigenvector has its largest component made real
//! and positive.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances as tol;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

const MAX_SWEEPS: usize = 100;

/// A square complex matrix equal to its own adjoint.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator(CMatrix);

impl HermitianOperator {
    /// Accepts `m` if it is square, non-empty and Hermitian within
    /// [`tol::HERMITIAN`]; the stored matrix is the exact Hermitian part.
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        let deviation = hermitian_deviation(&m);
        if deviation > tol::HERMITIAN {
            return Err(Error::NonHermitian { deviation });
        }
        Ok(Self::from_matrix(m))
    }

    /// Takes the Hermitian part of `m` without checking how far it was from Hermitian.
    pub(crate) fn from_matrix(m: CMatrix) -> Self {
        let h = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        Self(h)
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(CMatrix::zeros(dim, dim))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let d = DVector::from_iterator(diag.len(), diag.iter().map(|&x| C64::new(x, 0.0)));
        Self(CMatrix::from_diagonal(&d))
    }

    /// `|v><v|`, without normalising `v`.
    pub fn outer(v: &CVector) -> Self {
        Self::from_matrix(v * v.adjoint())
    }

    /// Orthogonal projector onto the span of the (orthonormal) columns of `basis`.
    pub fn projector_onto(basis: &CMatrix) -> Self {
        Self::from_matrix(basis * basis.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.diagonal().iter().map(|z| z.re).sum()
    }

    /// `Tr(self * other)`, real for Hermitian arguments.
    pub fn trace_product(&self, other: &HermitianOperator) -> f64 {
        trace_product(&self.0, &other.0).re
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(&self.0 * C64::new(s, 0.0))
    }

    /// `U A U†`.
    pub fn conjugated(&self, u: &CMatrix) -> Self {
        Self::from_matrix(u * &self.0 * u.adjoint())
    }

    /// `B A B` for Hermitian `B`.
    pub fn sandwiched(&self, b: &HermitianOperator) -> Self {
        Self::from_matrix(&b.0 * &self.0 * &b.0)
    }

    pub fn eig(&self) -> Spectrum {
        eig_hermitian(self)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self.eig().eigenvalues.last().expect("dim >= 1")
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eig().eigenvalues[0]
    }

    /// Spectral norm.
    pub fn norm(&self) -> f64 {
        let s = self.eig();
        s.eigenvalues.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Spectral norm of `self - other`.
    pub fn distance(&self, other: &HermitianOperator) -> f64 {
        (self - other).norm()
    }
}

impl Add for &HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: &HermitianOperator) -> HermitianOperator {
        HermitianOperator(&self.0 + &rhs.0)
    }
}

impl Sub for &HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: &HermitianOperator) -> HermitianOperator {
        HermitianOperator(&self.0 - &rhs.0)
    }
}

impl Mul for &HermitianOperator {
    type Output = CMatrix;
    fn mul(self, rhs: &HermitianOperator) -> CMatrix {
        &self.0 * &rhs.0
    }
}

/// Eigenvalues sorted descending with matching orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> CVector {
        self.eigenvectors.column(k).into_owned()
    }

    /// Columns `indices` of the eigenvector matrix.
    pub fn vectors(&self, indices: impl IntoIterator<Item = usize>) -> CMatrix {
        let cols: Vec<CVector> = indices.into_iter().map(|k| self.vector(k)).collect();
        if cols.is_empty() {
            return CMatrix::zeros(self.dim(), 0);
        }
        CMatrix::from_columns(&cols)
    }

    /// Support cutoff `SUPPORT_REL * max(1, max |lambda|)`.
    pub fn cutoff(&self) -> f64 {
        let scale = self.eigenvalues.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
        tol::SUPPORT_REL * scale
    }

    pub fn support_indices(&self) -> Vec<usize> {
        let cut = self.cutoff();
        (0..self.dim()).filter(|&k| self.eigenvalues[k] > cut).collect()
    }

    /// `sum_k f(lambda_k) |v_k><v_k|`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> HermitianOperator {
        let n = self.dim();
        let mut scaled = self.eigenvectors.clone();
        for k in 0..n {
            let w = C64::new(f(self.eigenvalues[k]), 0.0);
            for r in 0..n {
                scaled[(r, k)] *= w;
            }
        }
        HermitianOperator::from_matrix(scaled * self.eigenvectors.adjoint())
    }

    pub fn reconstruct(&self) -> HermitianOperator {
        self.map(|x| x)
    }
}

/// Eigendecomposition of a Hermitian operator, eigenvalues descending.
pub fn eig_hermitian(a: &HermitianOperator) -> Spectrum {
    let (values, vectors) = jacobi(a.matrix());
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| values[k]).collect();
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &vectors.column(src));
    }
    canonicalize(&eigenvalues, &mut eigenvectors);
    Spectrum { eigenvalues, eigenvectors }
}

/// Cyclic Jacobi sweeps; returns unsorted eigenvalues and eigenvector columns.
fn jacobi(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let mut a = m.clone();
    let mut v = CMatrix::identity(n, n);
    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        return (vec![0.0; n], v);
    }
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-16 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // U = diag(1, conj(phase)) * [[c, s], [-s, c]] acting on (p, q)
                let u_pp = C64::new(c, 0.0);
                let u_pq = C64::new(s, 0.0);
                let u_qp = -phase.conj() * s;
                let u_qq = phase.conj() * c;
                for r in 0..n {
                    let x = a[(r, p)];
                    let y = a[(r, q)];
                    a[(r, p)] = x * u_pp + y * u_qp;
                    a[(r, q)] = x * u_pq + y * u_qq;
                    let x = v[(r, p)];
                    let y = v[(r, q)];
                    v[(r, p)] = x * u_pp + y * u_qp;
                    v[(r, q)] = x * u_pq + y * u_qq;
                }
                for col in 0..n {
                    let x = a[(p, col)];
                    let y = a[(q, col)];
                    a[(p, col)] = u_pp.conj() * x + u_qp.conj() * y;
                    a[(q, col)] = u_pq.conj() * x + u_qq.conj() * y;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
            }
        }
    }
    ((0..n).map(|k| a[(k, k)].re).collect(), v)
}

fn canonicalize(values: &[f64], vectors: &mut CMatrix) {
    let n = values.len();
    let scale = values.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    let cluster_tol = 1e-10 * scale;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[end - 1] - values[end] <= cluster_tol {
            end += 1;
        }
        if end - start > 1 {
            let block = vectors.columns(start, end - start).into_owned();
            if let Some(basis) = canonical_basis(&block) {
                vectors.columns_mut(start, end - start).copy_from(&basis);
            }
        }
        start = end;
    }
    for k in 0..n {
        let mut col = vectors.column(k).into_owned();
        fix_phase(&mut col);
        vectors.set_column(k, &col);
    }
}

/// Orthonormal basis of span(block) built from projected unit vectors in index order.
fn canonical_basis(block: &CMatrix) -> Option<CMatrix> {
    let (n, m) = block.shape();
    let mut accepted: Vec<CVector> = Vec::with_capacity(m);
    for k in 0..n {
        if accepted.len() == m {
            break;
        }
        // P e_k = B (B^† e_k)
        let coeffs = block.row(k).adjoint();
        let mut w: CVector = block * coeffs;
        for _ in 0..2 {
            for u in &accepted {
                let proj = u.dotc(&w);
                w -= u * proj;
            }
        }
        let norm = w.norm();
        if norm > 1e-4 {
            accepted.push(w / C64::new(norm, 0.0));
        }
    }
    (accepted.len() == m).then(|| CMatrix::from_columns(&accepted))
}

fn fix_phase(v: &mut CVector) {
    let max = v.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    if max == 0.0 {
        return;
    }
    let pivot = v.iter().position(|z| z.norm() >= max - 1e-12).unwrap_or(0);
    let z = v[pivot];
    let rot = z.conj() / z.norm();
    for x in v.iter_mut() {
        *x *= rot;
    }
}

/// `A^exponent` on the support of `A`; eigenvalues at or below the support
/// cutoff map to zero for every exponent.
pub fn psd_power(a: &HermitianOperator, exponent: f64) -> Result<HermitianOperator> {
    let spec = a.eig();
    let min = *spec.eigenvalues.last().expect("dim >= 1");
    if min < -tol::PSD {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    let cut = spec.cutoff();
    Ok(spec.map(|x| if x > cut { x.powf(exponent) } else { 0.0 }))
}

/// Projector onto the eigenvectors of `A` with eigenvalue above the support cutoff.
pub fn support_projector(a: &HermitianOperator) -> Result<HermitianOperator> {
    Ok(HermitianOperator::projector_onto(&support_basis(a)?))
}

/// Orthonormal columns spanning the support of a PSD operator.
pub fn support_basis(a: &HermitianOperator) -> Result<CMatrix> {
    let spec = a.eig();
    let min = *spec.eigenvalues.last().expect("dim >= 1");
    if min < -tol::PSD {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    Ok(spec.vectors(spec.support_indices()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsdCheck {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
}

pub fn is_psd(a: &HermitianOperator, tol: f64) -> PsdCheck {
    let min_eigenvalue = a.min_eigenvalue();
    PsdCheck { is_psd: min_eigenvalue >= -tol, min_eigenvalue }
}

/// Number of eigenvalues above `rel * max(1, max |lambda|)`.
pub fn numeric_rank(a: &HermitianOperator, rel: f64) -> usize {
    let spec = a.eig();
    let scale = spec.eigenvalues.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    spec.eigenvalues.iter().filter(|&&x| x > rel * scale).count()
}

/// Spectral norm of an arbitrary complex matrix.
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let gram = HermitianOperator::from_matrix(m.adjoint() * m);
    gram.max_eigenvalue().max(0.0).sqrt()
}

pub fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Orthonormal basis of the real space of `n x n` Hermitian matrices under
/// `<A, B> = Tr(AB)`: diagonal units first, then symmetric and antisymmetric
/// pairs for each `k < l`.
pub fn hermitian_basis(n: usize) -> Vec<CMatrix> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(n * n);
    for k in 0..n {
        let mut m = CMatrix::zeros(n, n);
        m[(k, k)] = C64::new(1.0, 0.0);
        out.push(m);
    }
    for k in 0..n {
        for l in k + 1..n {
            let mut s = CMatrix::zeros(n, n);
            s[(k, l)] = C64::new(h, 0.0);
            s[(l, k)] = C64::new(h, 0.0);
            out.push(s);
            let mut a = CMatrix::zeros(n, n);
            a[(k, l)] = C64::new(0.0, h);
            a[(l, k)] = C64::new(0.0, -h);
            out.push(a);
        }
    }
    out
}

/// Coordinates of a Hermitian matrix in [`hermitian_basis`].
pub fn hermitian_coords(x: &CMatrix) -> DVector<f64> {
    let n = x.nrows();
    let s = std::f64::consts::SQRT_2;
    let mut v = Vec::with_capacity(n * n);
    for k in 0..n {
        v.push(x[(k, k)].re);
    }
    for k in 0..n {
        for l in k + 1..n {
            v.push(s * x[(k, l)].re);
            v.push(s * x[(k, l)].im);
        }
    }
    DVector::from_vec(v)
}

/// Inverse of [`hermitian_coords`].
pub fn from_hermitian_coords(v: &[f64], n: usize) -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = CMatrix::zeros(n, n);
    for k in 0..n {
        m[(k, k)] = C64::new(v[k], 0.0);
    }
    let mut idx = n;
    for k in 0..n {
        for l in k + 1..n {
            let z = C64::new(h * v[idx], h * v[idx + 1]);
            m[(k, l)] = z;
            m[(l, k)] = z.conj();
            idx += 2;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn herm(rows: &[&[C64]]) -> HermitianOperator {
        let n = rows.len();
        HermitianOperator::new(CMatrix::from_fn(n, n, |i, j| rows[i][j])).unwrap()
    }

    fn random_hermitian(n: usize, seed: u64) -> HermitianOperator {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let m = CMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        HermitianOperator::from_matrix(m)
    }

    #[test]
    fn identity_spectrum() {
        let s = HermitianOperator::identity(2).eig();
        assert_eq!(s.eigenvalues, vec![1.0, 1.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let x = herm(&[&[c(0., 0.), c(1., 0.)], &[c(1., 0.), c(0., 0.)]]);
        let s = x.eig();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_reconstruction_and_orthonormality() {
        for seed in 0..20 {
            let h = random_hermitian(4, seed);
            let s = h.eig();
            assert!(s.reconstruct().distance(&h) < 1e-10);
            let gram = s.eigenvectors.adjoint() * &s.eigenvectors;
            assert!(op_norm(&(gram - CMatrix::identity(4, 4))) < tol::ORTHONORMAL);
            assert!(s.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
            let sum: f64 = s.eigenvalues.iter().sum();
            assert!((sum - h.trace()).abs() < 1e-10);
        }
    }

    #[test]
    fn eigensolver_is_deterministic() {
        let h = random_hermitian(5, 7);
        let a = h.eig();
        let b = h.eig();
        assert_eq!(a.eigenvalues, b.eigenvalues);
        assert_eq!(a.eigenvectors, b.eigenvectors);
    }

    #[test]
    fn degenerate_basis_is_canonical() {
        // I_3 rotated by a random unitary is still I_3: the canonical basis must be e_k.
        let h = HermitianOperator::from_diagonal(&[2.0, 2.0, 1.0]);
        let s = h.eig();
        assert!((s.eigenvectors[(0, 0)] - c(1., 0.)).norm() < 1e-14);
        assert!((s.eigenvectors[(1, 1)] - c(1., 0.)).norm() < 1e-14);
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(1., 0.), c(0., 0.), c(1., 0.)]);
        assert!(matches!(HermitianOperator::new(m), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn psd_power_diagonal_cases() {
        let a = HermitianOperator::from_diagonal(&[4.0, 9.0]);
        let r = psd_power(&a, 0.5).unwrap();
        assert!(r.distance(&HermitianOperator::from_diagonal(&[2.0, 3.0])) < 1e-14);

        let a = HermitianOperator::from_diagonal(&[4.0, 0.0]);
        let r = psd_power(&a, -0.5).unwrap();
        assert!(r.distance(&HermitianOperator::from_diagonal(&[0.5, 0.0])) < 1e-14);

        let a = HermitianOperator::from_diagonal(&[2.0, 8.0]);
        let r = psd_power(&a, -1.0).unwrap();
        assert!(r.distance(&HermitianOperator::from_diagonal(&[0.5, 0.125])) < 1e-14);
    }

    #[test]
    fn psd_power_rejects_negative() {
        let a = HermitianOperator::from_diagonal(&[1.0, -0.1]);
        assert!(matches!(psd_power(&a, 0.5), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn support_projector_cases() {
        let p = support_projector(&HermitianOperator::from_diagonal(&[3.0, 0.0])).unwrap();
        assert!(p.distance(&HermitianOperator::from_diagonal(&[1.0, 0.0])) < 1e-14);
        let p = support_projector(&HermitianOperator::identity(3)).unwrap();
        assert!(p.distance(&HermitianOperator::identity(3)) < 1e-14);
        let v = CVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        let psi = HermitianOperator::outer(&v);
        assert!(support_projector(&psi).unwrap().distance(&psi) < 1e-14);
    }

    #[test]
    fn is_psd_cases() {
        let r = is_psd(&HermitianOperator::from_diagonal(&[1.0, 0.0]), 1e-9);
        assert!(r.is_psd && r.min_eigenvalue.abs() < 1e-15);
        let r = is_psd(&HermitianOperator::from_diagonal(&[1.0, -0.1]), 1e-9);
        assert!(!r.is_psd && (r.min_eigenvalue + 0.1).abs() < 1e-15);
        let v = CVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        let q = &HermitianOperator::identity(2) - &HermitianOperator::outer(&v);
        assert!(is_psd(&q, 1e-9).is_psd);
    }

    #[test]
    fn hermitian_coordinates_round_trip() {
        let m = CMatrix::from_row_slice(
            3,
            3,
            &[
                c(1.0, 0.0),
                c(0.2, -0.3),
                c(0.0, 1.0),
                c(0.2, 0.3),
                c(-2.0, 0.0),
                c(0.5, 0.5),
                c(0.0, -1.0),
                c(0.5, -0.5),
                c(0.7, 0.0),
            ],
        );
        let v = hermitian_coords(&m);
        assert!((from_hermitian_coords(v.as_slice(), 3) - &m).norm() < 1e-15);
        let basis = hermitian_basis(3);
        for (a, ba) in basis.iter().enumerate() {
            for (b, bb) in basis.iter().enumerate() {
                let ip = trace_product(ba, bb);
                assert!((ip.re - if a == b { 1.0 } else { 0.0 }).abs() < 1e-15 && ip.im.abs() < 1e-15);
            }
            assert!((trace_product(ba, &m).re - v[a]).abs() < 1e-14);
        }
    }
}
