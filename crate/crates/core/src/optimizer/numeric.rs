//! General solver for the failure-minimisation semidefinite program.
//!
//! Coordinates: `W` spans the joint range `Lambda` of the support projectors
//! and `U_j` spans the range of `Lambda_j`. With `K_j = W† U_j` and
//! `G_j = U_j† rho U_j` the problem reads
//!
//! ```text
//! max  sum_j Tr(G_j a_j)   s.t.  a_j >= 0,  sum_j K_j a_j K_j† <= I
//! min  Tr Z                s.t.  Z >= 0,    K_j† Z K_j - G_j >= 0
//! ```
//!
//! The dual is followed along its barrier path with damped Newton steps.
//! Once the barrier parameter is small the active sets are read off and the
//! slackness equations are solved directly, which lands on the optimum to
//! machine precision whenever strict complementarity holds.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ensemble::{StateEnsemble, Symmetry};
use crate::error::{Error, Result};
use crate::geometry::McGeometry;
use crate::linalg::{
    from_hermitian_coords, hermitian_basis, hermitian_coords, support_basis, CMatrix, HermitianOperator, C64,
};

use super::{DetectionSet, SolveMode, SolveReport, SolverMetadata};

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    /// Target duality gap on `R`.
    pub opt_tol: f64,
    /// Cap on the total number of Newton iterations, restarts included.
    pub max_iters: usize,
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { opt_tol: 1e-8, max_iters: 2000, max_restarts: 3, seed: 0 }
    }
}

impl SolverOptions {
    /// Defaults with the seed taken from `MAXCONF_SEED` when set.
    pub fn from_env() -> Self {
        let seed = std::env::var("MAXCONF_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(0);
        Self { seed, ..Self::default() }
    }
}

const MU_START: f64 = 1.0;
const MU_SHRINK: f64 = 10.0;
const MU_POLISH: f64 = 1e-4;
const MU_FLOOR: f64 = 1e-13;
const CENTERED: f64 = 1e-3;
const STAGE_ITERS: usize = 60;

struct Problem {
    w: CMatrix,
    u: Vec<CMatrix>,
    k: Vec<CMatrix>,
    g: Vec<CMatrix>,
    basis: Vec<CMatrix>,
}

impl Problem {
    fn new(e: &StateEnsemble, geo: &McGeometry) -> Result<Self> {
        let w = support_basis(&geo.span_projector)?;
        let mut u = Vec::with_capacity(e.len());
        let mut k = Vec::with_capacity(e.len());
        let mut g = Vec::with_capacity(e.len());
        for j in 0..e.len() {
            let uj = support_basis(geo.lambda(j))?;
            k.push(w.adjoint() * &uj);
            g.push(uj.adjoint() * geo.average.matrix() * &uj);
            u.push(uj);
        }
        let basis = hermitian_basis(w.ncols());
        Ok(Self { w, u, k, g, basis })
    }

    fn dim(&self) -> usize {
        self.w.ncols()
    }

    fn slacks(&self, z: &CMatrix) -> Vec<CMatrix> {
        self.k.iter().zip(&self.g).map(|(k, g)| k.adjoint() * z * k - g).collect()
    }

    fn barrier_size(&self) -> f64 {
        (self.dim() + self.k.iter().map(|k| k.ncols()).sum::<usize>()) as f64
    }
}

/// Dual iterate plus the primal estimate recovered from its last Newton system.
struct Iterate {
    z: CMatrix,
    a: Vec<CMatrix>,
    decrement: f64,
}

pub fn solve_numeric(e: &StateEnsemble, g: &McGeometry, options: &SolverOptions) -> Result<SolveReport> {
    let report = e.validate();
    if !report.is_valid() {
        return Err(Error::InfeasibleInput(report.to_string()));
    }
    if g.len() != e.len() || g.dim() != e.dim() {
        return Err(Error::InfeasibleInput("geometry does not belong to this ensemble".into()));
    }
    let problem = Problem::new(e, g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut iterations = 0;
    let mut last_error = Error::NotConverged { iterations: 0 };
    for restart in 0..=options.max_restarts {
        let jitter = if restart == 0 { 0.0 } else { 0.1 };
        match path_follow(&problem, e, g, options, jitter, &mut rng, &mut iterations) {
            Ok((detection, z, polished)) => {
                let (detection, z) = match e.symmetry() {
                    Some(v) => symmetrized(e, g, v, &detection, &z).unwrap_or((detection, z)),
                    None => (detection, z),
                };
                let scale = g.average.trace_product(&g.span_projector);
                let mut report = SolveReport::assemble(
                    e,
                    g,
                    detection,
                    z,
                    SolverMetadata {
                        mode: SolveMode::Numeric,
                        iterations,
                        restarts: restart,
                        scale,
                        reduced_rate: 0.0,
                        polished,
                    },
                )?;
                report.metadata.reduced_rate = report.rate / scale;
                return Ok(report);
            }
            Err(err) => last_error = err,
        }
        if iterations >= options.max_iters {
            break;
        }
    }
    match last_error {
        Error::NotConverged { .. } => Err(Error::NotConverged { iterations }),
        other => Err(other),
    }
}

/// Group average of an optimal pair, kept only if it still certifies.
/// Covariant optima exist by convexity; averaging picks one out of a
/// non-unique optimal face.
fn symmetrized(
    e: &StateEnsemble,
    g: &McGeometry,
    v: &Symmetry,
    d: &DetectionSet,
    z: &HermitianOperator,
) -> Option<(DetectionSet, HermitianOperator)> {
    let n = e.len();
    let dim = e.dim();
    let mut first = HermitianOperator::zeros(dim);
    let mut zbar = HermitianOperator::zeros(dim);
    for j in 0..n {
        first = &first + &d.conclusive(j).conjugated(&v.power(j).adjoint());
        zbar = &zbar + &v.apply(j, z);
    }
    let first = first.scaled(1.0 / n as f64);
    let zbar = zbar.scaled(1.0 / n as f64);
    let detection = DetectionSet::from_conclusive((0..n).map(|j| v.apply(j, &first)).collect()).ok()?;
    super::verify_certificate(e, g, &detection, &zbar).accepted.then_some((detection, zbar))
}

fn path_follow(
    p: &Problem,
    e: &StateEnsemble,
    geo: &McGeometry,
    options: &SolverOptions,
    jitter: f64,
    rng: &mut ChaCha8Rng,
    iterations: &mut usize,
) -> Result<(DetectionSet, HermitianOperator, bool)> {
    let n = p.dim();
    let top = p.g.iter().map(|g| HermitianOperator::from_matrix(g.clone()).max_eigenvalue()).fold(0.0, f64::max);
    let zeta = 1.0 + 2.0 * top;
    let mut z = CMatrix::identity(n, n) * C64::new(zeta, 0.0);
    if jitter > 0.0 {
        let coords: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let h = from_hermitian_coords(&coords, n);
        let norm = HermitianOperator::from_matrix(h.clone()).norm().max(1e-300);
        z += h * C64::new(jitter * zeta / norm, 0.0);
    }

    let mut mu = MU_START;
    let mut best: Option<(DetectionSet, HermitianOperator)> = None;
    loop {
        let it = match center(p, &mut z, mu, options, iterations) {
            Ok(it) => it,
            Err(_) if best.is_some() => break,
            Err(err) => return Err(err),
        };
        let gap = mu * p.barrier_size();
        if mu <= MU_POLISH {
            if let Some((d, zf)) = polish(p, e, geo, &it, mu) {
                return Ok((d, zf, true));
            }
            best = Some(assemble(p, &it.z, &it.a)?);
        }
        if gap <= options.opt_tol * 1e-3 || mu <= MU_FLOOR {
            break;
        }
        mu /= MU_SHRINK;
    }
    match best {
        Some((d, z)) => Ok((d, z, false)),
        None => Err(Error::NotConverged { iterations: *iterations }),
    }
}

/// Damped Newton iterations on `Tr Z / mu - log det Z - sum_j log det Y_j`.
/// Near the end of the path a failed iteration returns the last good point.
fn center(p: &Problem, z: &mut CMatrix, mu: f64, options: &SolverOptions, iterations: &mut usize) -> Result<Iterate> {
    let mut last: Option<Iterate> = None;
    for _ in 0..STAGE_ITERS {
        if *iterations >= options.max_iters {
            return Err(Error::NotConverged { iterations: *iterations });
        }
        *iterations += 1;
        let step = match newton_step(p, z, mu) {
            Some(s) => s,
            None => break,
        };
        let done = step.decrement < CENTERED;
        let mut t = if step.decrement < 0.25 { 1.0 } else { 1.0 / (1.0 + step.decrement) };
        let mut moved = false;
        for _ in 0..40 {
            let trial = &*z + &step.delta * C64::new(t, 0.0);
            if is_pd(&trial) && p.slacks(&trial).iter().all(is_pd) {
                *z = trial;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        last = Some(Iterate { z: z.clone(), a: step.a, decrement: step.decrement });
        if done || !moved {
            break;
        }
    }
    match last {
        Some(it) if it.decrement < 1.0 || mu <= MU_POLISH => Ok(it),
        _ => Err(Error::NotConverged { iterations: *iterations }),
    }
}

struct Step {
    delta: CMatrix,
    decrement: f64,
    a: Vec<CMatrix>,
}

fn newton_step(p: &Problem, z: &CMatrix, mu: f64) -> Option<Step> {
    let n = p.dim();
    let zi = inverse_pd(z)?;
    let yi: Vec<CMatrix> = p.slacks(z).iter().map(inverse_pd).collect::<Option<_>>()?;
    let f: Vec<CMatrix> = p.k.iter().zip(&yi).map(|(k, y)| k * y * k.adjoint()).collect();

    let hess = |x: &CMatrix| -> CMatrix {
        let mut out = &zi * x * &zi;
        for fj in &f {
            out += fj * x * fj;
        }
        out
    };
    let mut grad = CMatrix::identity(n, n) * C64::new(1.0 / mu, 0.0) - &zi;
    for fj in &f {
        grad -= fj;
    }
    let dim = n * n;
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for (b, basis) in p.basis.iter().enumerate() {
        h.set_column(b, &hermitian_coords(&hess(basis)));
    }
    let h = (&h + h.transpose()) * 0.5;
    let rhs = -hermitian_coords(&grad);
    let chol = h.clone().cholesky()?;
    let dx = chol.solve(&rhs);
    let decrement = dx.dot(&(&h * &dx)).max(0.0).sqrt();
    if !decrement.is_finite() {
        return None;
    }
    let delta = from_hermitian_coords(dx.as_slice(), n);
    let a =
        p.k.iter()
            .zip(&yi)
            .map(|(k, y)| {
                let dy = k.adjoint() * &delta * k;
                (y - y * dy * y) * C64::new(mu, 0.0)
            })
            .collect();
    Some(Step { delta, decrement, a })
}

fn inverse_pd(m: &CMatrix) -> Option<CMatrix> {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    Some(h.cholesky()?.inverse())
}

fn is_pd(m: &CMatrix) -> bool {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    h.cholesky().is_some()
}

fn assemble(p: &Problem, z: &CMatrix, a: &[CMatrix]) -> Result<(DetectionSet, HermitianOperator)> {
    let conclusive = p.u.iter().zip(a).map(|(u, aj)| HermitianOperator::from_matrix(u * aj * u.adjoint())).collect();
    let detection = DetectionSet::from_conclusive(conclusive)?;
    let z = HermitianOperator::from_matrix(&p.w * z * p.w.adjoint());
    Ok((detection, z))
}

/// Eigenvectors of `m` whose eigenvalue exceeds `threshold`.
fn active_basis(m: &CMatrix, threshold: f64) -> CMatrix {
    let spec = HermitianOperator::from_matrix(m.clone()).eig();
    let idx: Vec<usize> = (0..spec.dim()).filter(|&k| spec.eigenvalues[k] > threshold).collect();
    spec.vectors(idx)
}

fn push_complex(out: &mut Vec<f64>, m: &CMatrix) {
    for x in m.iter() {
        out.push(x.re);
        out.push(x.im);
    }
}

/// Minimum-norm `delta` with `A delta = r`, or `None` if the system is inconsistent.
fn min_norm_solve(a: DMatrix<f64>, r: DVector<f64>) -> Option<DVector<f64>> {
    if a.ncols() == 0 {
        return (r.amax() <= 1e-10).then(|| DVector::zeros(0));
    }
    if a.nrows() == 0 {
        return Some(DVector::zeros(a.ncols()));
    }
    let a_copy = a.clone();
    let svd = a.svd(true, true);
    let top = svd.singular_values.max();
    let delta = svd.solve(&r, 1e-11 * top.max(1e-300)).ok()?;
    let resid = (&a_copy * &delta - &r).amax();
    (resid <= 1e-10 * (1.0 + r.amax())).then_some(delta)
}

/// Solves the slackness equations on the active sets read from `it`.
fn polish(
    p: &Problem,
    e: &StateEnsemble,
    geo: &McGeometry,
    it: &Iterate,
    mu: f64,
) -> Option<(DetectionSet, HermitianOperator)> {
    let n = p.dim();
    let threshold = mu.sqrt();
    let t = active_basis(&it.z, threshold);
    let q: Vec<CMatrix> = it.a.iter().map(|a| active_basis(a, threshold)).collect();
    let r = t.ncols();

    // (I - sum_j K_j Q_j b_j Q_j† K_j†) T = 0
    let mut a_blocks: Vec<Vec<f64>> = Vec::new();
    let mut x0 = Vec::new();
    for (j, qj) in q.iter().enumerate() {
        let kq = &p.k[j] * qj;
        for bb in hermitian_basis(qj.ncols()) {
            let mut col = Vec::with_capacity(2 * n * r);
            push_complex(&mut col, &(&kq * bb * kq.adjoint() * &t));
            a_blocks.push(col);
        }
        x0.extend(hermitian_coords(&(qj.adjoint() * &it.a[j] * qj)).iter());
    }
    let rows = 2 * n * r;
    let amat = DMatrix::from_fn(rows, a_blocks.len(), |i, c| a_blocks[c][i]);
    let x0 = DVector::from_vec(x0);
    let mut target = Vec::with_capacity(rows);
    push_complex(&mut target, &t);
    let resid = DVector::from_vec(target) - &amat * &x0;
    let b = x0 + min_norm_solve(amat, resid)?;

    let mut a = Vec::with_capacity(q.len());
    let mut offset = 0;
    for qj in &q {
        let m = qj.ncols();
        let bj = from_hermitian_coords(&b.as_slice()[offset..offset + m * m], m);
        offset += m * m;
        a.push(qj * bj * qj.adjoint());
    }

    // (K_j† T z T† K_j - G_j) Q_j = 0
    let mut cols: Vec<Vec<f64>> = Vec::new();
    for bb in hermitian_basis(r) {
        let zb = &t * bb * t.adjoint();
        let mut col = Vec::new();
        for (j, qj) in q.iter().enumerate() {
            push_complex(&mut col, &(p.k[j].adjoint() * &zb * &p.k[j] * qj));
        }
        cols.push(col);
    }
    let mut target = Vec::new();
    for (j, qj) in q.iter().enumerate() {
        push_complex(&mut target, &(&p.g[j] * qj));
    }
    let rows = target.len();
    let amat = DMatrix::from_fn(rows, cols.len(), |i, c| cols[c][i]);
    let x0 = hermitian_coords(&(t.adjoint() * &it.z * &t));
    let resid = DVector::from_vec(target) - &amat * &x0;
    let zc = &x0 + min_norm_solve(amat, resid)?;
    let z = &t * from_hermitian_coords(zc.as_slice(), r) * t.adjoint();

    let (detection, zf) = assemble(p, &z, &a).ok()?;
    let cert = super::verify_certificate(e, geo, &detection, &zf);
    cert.accepted.then_some((detection, zf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{build_depolarized_family, build_symmetric_ensemble, Reference, SymmetrySpec};
    use crate::geometry::geometry;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn solve(e: &StateEnsemble) -> SolveReport {
        solve_numeric(e, &geometry(e).unwrap(), &SolverOptions::default()).unwrap()
    }

    #[test]
    fn trine_reaches_unit_rate() {
        let h = 0.5_f64.sqrt();
        let e =
            build_symmetric_ensemble(&SymmetrySpec::with_default_phases(3, Reference::Pure(vec![c(h), c(h)]))).unwrap();
        let rep = solve(&e);
        assert!((rep.rate - 1.0).abs() < 1e-6);
        assert!(rep.certified(), "{:?}", rep.certificate.failures());
    }

    #[test]
    fn qubit_mixed_matches_closed_form() {
        let gamma = std::f64::consts::FRAC_PI_3;
        let spec =
            SymmetrySpec::with_default_phases(3, Reference::Pure(vec![c((gamma / 2.0).cos()), c((gamma / 2.0).sin())]));
        let e = build_depolarized_family(&spec, 0.6).unwrap();
        let rep = solve(&e);
        assert!((rep.failure - 0.3).abs() < 1e-6, "{}", rep.failure);
        assert!(rep.certified(), "{:?}", rep.certificate.failures());
    }

    #[test]
    fn orthogonal_states() {
        let e = StateEnsemble::new(
            vec![0.4, 0.6],
            vec![HermitianOperator::from_diagonal(&[1.0, 0.0]), HermitianOperator::from_diagonal(&[0.0, 1.0])],
        )
        .unwrap();
        let rep = solve(&e);
        assert!((rep.rate - 1.0).abs() < 1e-6);
        assert!(rep.detection.conclusive(0).distance(&e.states()[0]) < 1e-6);
        assert!(rep.certified());
    }

    #[test]
    fn reduced_problem_records_scale() {
        let e = StateEnsemble::new(
            vec![0.5, 0.5],
            vec![
                HermitianOperator::from_diagonal(&[0.7, 0.3, 0.0]),
                HermitianOperator::from_diagonal(&[0.2, 0.8, 0.0]),
            ],
        )
        .unwrap();
        let rep = solve(&e);
        assert!(rep.certified(), "{:?}", rep.certificate.failures());
        assert!((rep.metadata.scale - 1.0).abs() < 1e-12);
    }

    #[test]
    fn seed_only_matters_on_restart() {
        let e = build_depolarized_family(
            &SymmetrySpec::with_default_phases(4, Reference::Pure(vec![c(0.6_f64.sqrt()), c(0.4_f64.sqrt())])),
            0.8,
        )
        .unwrap();
        let g = geometry(&e).unwrap();
        let a = solve_numeric(&e, &g, &SolverOptions { seed: 1, ..Default::default() }).unwrap();
        let b = solve_numeric(&e, &g, &SolverOptions { seed: 2, ..Default::default() }).unwrap();
        assert_eq!(a.rate, b.rate);
    }
}
