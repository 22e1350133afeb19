use crate::ensemble::{StateEnsemble, Symmetry};
use crate::error::{Error, Result};
use crate::geometry::McGeometry;
use crate::linalg::{CMatrix, HermitianOperator};
use crate::tolerances as tol;

use super::{DetectionSet, SolveMode, SolveReport, SolverMetadata};

/// Overlaps `|<r_l|nu>|^2` below this are treated as zero and leave `l` out of the minimum.
const ZERO_OVERLAP: f64 = 1e-14;

/// Closed-form optimum for symmetric ensembles whose transformed reference
/// state has a nondegenerate top eigenvalue.
pub fn solve_rank1_symmetric(e: &StateEnsemble, g: &McGeometry) -> Result<SolveReport> {
    let symmetry = e.symmetry().ok_or_else(|| Error::NotSymmetric("ensemble carries no symmetry".into()))?;
    let multiplicity = g.states[0].degeneracy;
    if multiplicity != 1 {
        return Err(Error::DegenerateTopEigenvalue { multiplicity });
    }
    let n = e.len() as f64;
    let dim = e.dim();
    let (basis, r) = joint_eigenbasis(symmetry, &g.average);
    let nu = g.states[0].transformed.eig().vector(0);
    let coords = basis.adjoint() * &nu;
    let overlaps: Vec<f64> = coords.iter().map(|x| x.norm_sqr()).collect();
    let cut = g.average.eig().cutoff();

    let candidates: Vec<usize> = (0..dim).filter(|&l| overlaps[l] > ZERO_OVERLAP && r[l] > cut).collect();
    let ratio = |l: usize| r[l] / overlaps[l];
    let min_ratio = candidates.iter().map(|&l| ratio(l)).fold(f64::INFINITY, f64::min);
    if !min_ratio.is_finite() {
        return Err(Error::Internal("top eigenvector has no weight on the support".into()));
    }
    let ties: Vec<usize> =
        candidates.iter().copied().filter(|&l| ratio(l) <= min_ratio * (1.0 + tol::TIE_REL)).collect();
    let alpha = min_ratio / n;

    let first = HermitianOperator::outer(&(g.inv_sqrt.matrix() * &nu)).scaled(alpha);
    let conclusive: Vec<_> = (0..e.len()).map(|j| symmetry.apply(j, &first)).collect();

    let mut failure_diag = vec![1.0; dim];
    for &l in &candidates {
        failure_diag[l] = 1.0 - n * alpha * overlaps[l] / r[l];
    }
    for &l in &ties {
        failure_diag[l] = 0.0;
    }
    let failure = HermitianOperator::from_diagonal(&failure_diag).conjugated(&basis);
    let mut operators = vec![failure];
    operators.extend(conclusive);
    let detection = DetectionSet::new(operators)?;

    let mut z_diag = vec![0.0; dim];
    for &l in &ties {
        z_diag[l] = n * alpha / ties.len() as f64;
    }
    let z = HermitianOperator::from_diagonal(&z_diag).conjugated(&basis);

    let scale = g.average.trace_product(&g.span_projector);
    let mut report = SolveReport::assemble(
        e,
        g,
        detection,
        z,
        SolverMetadata {
            mode: SolveMode::Analytic,
            iterations: 0,
            restarts: 0,
            scale,
            reduced_rate: 0.0,
            polished: false,
        },
    )?;
    report.metadata.reduced_rate = report.rate / scale;
    Ok(report)
}

/// Orthonormal basis diagonalising both the symmetry operator and `rho`,
/// with the eigenvalues of `rho` in that basis.
fn joint_eigenbasis(symmetry: &Symmetry, rho: &HermitianOperator) -> (CMatrix, Vec<f64>) {
    let d = symmetry.dim();
    let mut assigned = vec![false; d];
    let mut basis = CMatrix::zeros(d, d);
    let mut r = vec![0.0; d];
    for l in 0..d {
        if assigned[l] {
            continue;
        }
        let block: Vec<usize> = (l..d)
            .filter(|&k| !assigned[k] && (symmetry.phases[k] - symmetry.phases[l]).norm() <= tol::PHASE)
            .collect();
        for &k in &block {
            assigned[k] = true;
        }
        let m = block.len();
        let sub = CMatrix::from_fn(m, m, |a, b| rho.matrix()[(block[a], block[b])]);
        let spec = HermitianOperator::from_matrix(sub).eig();
        for (col, &k) in block.iter().enumerate() {
            r[k] = spec.eigenvalues[col];
            for (row, &kk) in block.iter().enumerate() {
                basis[(kk, k)] = spec.eigenvectors[(row, col)];
            }
        }
    }
    (basis, r)
}
