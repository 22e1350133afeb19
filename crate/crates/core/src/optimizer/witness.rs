//! Refutation of a candidate certificate with a negative eigenvalue.
//!
//! If `X` (either `Z` or some `Lambda_k (Z - rho) Lambda_k`) has eigenvector
//! `|mu>` with eigenvalue `-mu`, the detection set is deformed with
//! `M = I - eps |mu><mu|` into `Pi'_j = M Pi_j M`, and the outcome tied to
//! `X` additionally receives `eps (2 - eps) |mu><mu|`. When the slackness
//! equalities hold, `Tr(Z Pi'_0) + sum_j Tr[Lambda_j (Z - rho) Lambda_j Pi'_j]`
//! equals `-2 eps mu + O(eps^2)`.
//!
//! That expression equals `Tr Z - R'` only while every `Pi'_j` stays on the
//! support of `Lambda_j`; otherwise the primed set is not a feasible
//! maximum-confidence measurement and `Tr Z - R'` can even be positive (the
//! trine with `Z = I/2 + t sigma_z`, `t > 1/2`, has `Tr Z = 1 >= R'` for every
//! measurement). `support_preserved` reports which situation applies.

use crate::ensemble::StateEnsemble;
use crate::error::{Error, Result};
use crate::geometry::McGeometry;
use crate::linalg::{op_norm, CVector, HermitianOperator};
use crate::tolerances as tol;

use super::DetectionSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessCase {
    /// `Z` itself has the negative eigenvalue; `Pi'_0` absorbs the extra term.
    Certificate,
    /// `Lambda_j (Z - rho) Lambda_j` has it; `Pi'_j` absorbs the extra term.
    Support(usize),
}

#[derive(Clone, Debug)]
pub struct WitnessReport {
    pub case: WitnessCase,
    pub mu: f64,
    pub vector: CVector,
    pub epsilon: f64,
    pub primed: DetectionSet,
    /// Completeness and positivity of the primed set.
    pub primed_valid: bool,
    /// Every `Pi'_j` still lives on the support of `Lambda_j`.
    pub support_preserved: bool,
    /// `sum_j Tr(rho Lambda_j Pi'_j Lambda_j)`.
    pub primed_rate: f64,
    /// `Tr Z - R'`; equal to `gap` when `support_preserved`.
    pub primed_trace_gap: f64,
    /// `Tr(Z Pi'_0) + sum_j Tr[Lambda_j (Z - rho) Lambda_j Pi'_j]`.
    pub gap: f64,
    /// The same expression at `eps = 0`.
    pub baseline: f64,
    /// `-2 eps mu`.
    pub predicted: f64,
    /// Largest slackness-equality residual of the unprimed pair.
    pub equality_residual: f64,
}

impl WitnessReport {
    /// Whether the unprimed pair satisfies the slackness equalities the construction relies on.
    pub fn preconditions_hold(&self) -> bool {
        self.equality_residual <= tol::CERT_EQUALITY
    }

    pub fn ratio(&self) -> f64 {
        self.gap / self.predicted
    }
}

fn gap_expression(g: &McGeometry, d: &DetectionSet, z: &HermitianOperator) -> f64 {
    let z_minus_rho = z - &g.average;
    let mut total = z.trace_product(d.failure());
    for j in 0..d.outcomes().min(g.len()) {
        total += z_minus_rho.sandwiched(g.lambda(j)).trace_product(d.conclusive(j));
    }
    total
}

pub fn perturbation_witness(
    e: &StateEnsemble,
    g: &McGeometry,
    d: &DetectionSet,
    z: &HermitianOperator,
    epsilon: f64,
) -> Result<WitnessReport> {
    if d.outcomes() != e.len() {
        return Err(Error::WrongStateCount { expected: e.len(), found: d.outcomes() });
    }
    if z.dim() != e.dim() || d.dim() != e.dim() {
        return Err(Error::DimensionMismatch { expected: e.dim(), found: z.dim().max(d.dim()) });
    }
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!("epsilon = {epsilon} outside [0, 1)")));
    }
    let z_minus_rho = z - &g.average;

    let spec = z.eig();
    let mut case = WitnessCase::Certificate;
    let mut lowest = *spec.eigenvalues.last().expect("dim >= 1");
    let mut vector = spec.vector(spec.dim() - 1);
    let mut equality_residual = op_norm(&(z * d.failure()));
    for j in 0..e.len() {
        let lambda = g.lambda(j);
        let s = z_minus_rho.sandwiched(lambda).eig();
        let v = *s.eigenvalues.last().expect("dim >= 1");
        if v < lowest {
            lowest = v;
            case = WitnessCase::Support(j);
            vector = s.vector(s.dim() - 1);
        }
        equality_residual =
            equality_residual.max(op_norm(&(lambda.matrix() * z_minus_rho.matrix() * d.conclusive(j).matrix())));
    }
    if lowest >= -tol::PSD {
        return Err(Error::NoNegativeEigenvalue { min_eigenvalue: lowest });
    }
    let mu = -lowest;

    let dim = e.dim();
    let dir = HermitianOperator::outer(&vector);
    let m = &HermitianOperator::identity(dim) - &dir.scaled(epsilon);
    let boosted = match case {
        WitnessCase::Certificate => 0,
        WitnessCase::Support(j) => j + 1,
    };
    let operators: Vec<HermitianOperator> = d
        .operators()
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let moved = p.sandwiched(&m);
            if k == boosted {
                &moved + &dir.scaled(epsilon * (2.0 - epsilon))
            } else {
                moved
            }
        })
        .collect();
    let primed = DetectionSet::new(operators)?;

    let check = primed.check(g);
    let primed_valid = check.completeness <= tol::CERT_EQUALITY && check.min_eigenvalue >= -tol::CERT_EQUALITY;
    let support_preserved = check.support <= tol::CERT_EQUALITY;
    let primed_rate: f64 =
        (0..e.len()).map(|j| g.average.trace_product(&primed.conclusive(j).sandwiched(g.lambda(j)))).sum();

    Ok(WitnessReport {
        case,
        mu,
        vector,
        epsilon,
        primed_valid,
        support_preserved,
        primed_rate,
        primed_trace_gap: z.trace() - primed_rate,
        gap: gap_expression(g, &primed, z),
        baseline: gap_expression(g, d, z),
        predicted: -2.0 * epsilon * mu,
        equality_residual,
        primed,
    })
}

/// Two-point check that `gap / (-2 eps mu) = 1 + k eps + O(eps^2)`.
#[derive(Clone, Debug)]
pub struct WitnessFit {
    pub reports: [WitnessReport; 2],
    pub ratios: [f64; 2],
    /// Secant slope of the ratio against `eps`.
    pub k: f64,
    /// Preconditions hold, `|k| eps <= 1/2`, and `|ratio - 1| <= 10 eps |k|` at both points.
    pub within: bool,
}

pub fn witness_fit(
    e: &StateEnsemble,
    g: &McGeometry,
    d: &DetectionSet,
    z: &HermitianOperator,
    epsilons: [f64; 2],
) -> Result<WitnessFit> {
    if epsilons[0] == epsilons[1] {
        return Err(Error::InvalidParameter("witness fit needs two distinct epsilon values".into()));
    }
    let a = perturbation_witness(e, g, d, z, epsilons[0])?;
    let b = perturbation_witness(e, g, d, z, epsilons[1])?;
    let ratios = [a.ratio(), b.ratio()];
    let k = (ratios[1] - ratios[0]) / (epsilons[1] - epsilons[0]);
    let largest = epsilons[0].max(epsilons[1]);
    let within = a.preconditions_hold()
        && b.preconditions_hold()
        && k.abs() * largest <= 0.5
        && ratios.iter().zip(&epsilons).all(|(r, eps)| (r - 1.0).abs() <= 10.0 * eps * k.abs());
    Ok(WitnessFit { reports: [a, b], ratios, k, within })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{build_symmetric_ensemble, Reference, SymmetrySpec};
    use crate::geometry::geometry;
    use crate::linalg::{CMatrix, C64};

    fn trine() -> (StateEnsemble, McGeometry, DetectionSet) {
        let h = C64::new(0.5_f64.sqrt(), 0.0);
        let e = build_symmetric_ensemble(&SymmetrySpec::with_default_phases(3, Reference::Pure(vec![h, h]))).unwrap();
        let g = geometry(&e).unwrap();
        let d = DetectionSet::from_conclusive(e.states().iter().map(|s| s.scaled(2.0 / 3.0)).collect()).unwrap();
        (e, g, d)
    }

    #[test]
    fn valid_certificate_has_no_witness() {
        let (e, g, d) = trine();
        let z = HermitianOperator::identity(2).scaled(0.5);
        assert!(matches!(perturbation_witness(&e, &g, &d, &z, 1e-3), Err(Error::NoNegativeEigenvalue { .. })));
    }

    #[test]
    fn shrunken_certificate_breaks_the_equalities() {
        let (e, g, d) = trine();
        let z = HermitianOperator::identity(2).scaled(0.4);
        let w = perturbation_witness(&e, &g, &d, &z, 1e-3).unwrap();
        assert!((w.mu - 0.1).abs() < 1e-12);
        assert!(matches!(w.case, WitnessCase::Support(_)));
        assert!(w.primed_valid);
        assert!(!w.preconditions_hold());
        assert!(w.primed_trace_gap < 0.0);
        assert!(!witness_fit(&e, &g, &d, &z, [1e-3, 1e-4]).unwrap().within);
    }

    #[test]
    fn negative_certificate_eigenvalue() {
        let (e, g, d) = trine();
        // sigma_z keeps every slackness equality of the trine intact.
        let mu = 0.05;
        let sz = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]));
        let z = &HermitianOperator::identity(2).scaled(0.5) + &HermitianOperator::new(sz).unwrap().scaled(0.5 + mu);
        let fit = witness_fit(&e, &g, &d, &z, [1e-3, 1e-4]).unwrap();
        assert_eq!(fit.reports[0].case, WitnessCase::Certificate);
        assert!(fit.reports[0].preconditions_hold());
        assert!((fit.reports[0].gap - (-1e-4)).abs() < 1e-6);
        assert!(fit.within, "{:?} {}", fit.ratios, fit.k);
        // The deformation leaves the Lambda_j supports, and Tr Z = 1 bounds every rate.
        assert!(!fit.reports[0].support_preserved);
        assert!(fit.reports[0].primed_trace_gap > 0.0);
    }
}
