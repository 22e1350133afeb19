//! State ensembles: priors, density operators, and cyclic symmetry.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{support_projector, CMatrix, CVector, HermitianOperator, C64};
use crate::tolerances as tol;

/// Cyclic symmetry `V = sum_l v_l |l><l|` on the canonical basis with `V^N = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct Symmetry {
    pub order: usize,
    pub phases: Vec<C64>,
}

impl Symmetry {
    pub fn new(order: usize, phases: Vec<C64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidParameter("symmetry order must be positive".into()));
        }
        for (index, v) in phases.iter().enumerate() {
            let deviation = (v.norm() - 1.0).abs().max((v.powu(order as u32) - C64::new(1.0, 0.0)).norm());
            if deviation > tol::PHASE {
                return Err(Error::InvalidPhases { index, deviation });
            }
        }
        Ok(Self { order, phases })
    }

    /// `v_l = exp(2 pi i l / N)` for `l = 1..=dim`.
    pub fn default_phases(order: usize, dim: usize) -> Vec<C64> {
        (1..=dim).map(|l| C64::from_polar(1.0, 2.0 * PI * l as f64 / order as f64)).collect()
    }

    pub fn dim(&self) -> usize {
        self.phases.len()
    }

    /// `V^power` as a dense matrix.
    pub fn power(&self, power: usize) -> CMatrix {
        let d = self.dim();
        let mut m = CMatrix::zeros(d, d);
        for (l, v) in self.phases.iter().enumerate() {
            m[(l, l)] = v.powu(power as u32);
        }
        m
    }

    /// `V^power A V^{† power}`.
    pub fn apply(&self, power: usize, a: &HermitianOperator) -> HermitianOperator {
        a.conjugated(&self.power(power))
    }

    pub fn apply_vector(&self, power: usize, v: &CVector) -> CVector {
        CVector::from_iterator(v.len(), v.iter().zip(&self.phases).map(|(x, p)| x * p.powu(power as u32)))
    }
}

/// Reference state of a symmetric family.
#[derive(Clone, Debug, PartialEq)]
pub enum Reference {
    /// Pure state given by its coefficients over the symmetry eigenbasis.
    Pure(Vec<C64>),
    Mixed(HermitianOperator),
}

impl Reference {
    pub fn dim(&self) -> usize {
        match self {
            Reference::Pure(c) => c.len(),
            Reference::Mixed(rho) => rho.dim(),
        }
    }

    pub fn density(&self) -> HermitianOperator {
        match self {
            Reference::Pure(c) => HermitianOperator::outer(&CVector::from_vec(c.clone())),
            Reference::Mixed(rho) => rho.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetrySpec {
    pub order: usize,
    pub phases: Vec<C64>,
    pub reference: Reference,
}

impl SymmetrySpec {
    /// Spec with the default eigenphases `exp(2 pi i l / N)`.
    pub fn with_default_phases(order: usize, reference: Reference) -> Self {
        let phases = Symmetry::default_phases(order, reference.dim());
        Self { order, phases, reference }
    }

    pub fn symmetry(&self) -> Result<Symmetry> {
        if self.phases.len() != self.reference.dim() {
            return Err(Error::DimensionMismatch { expected: self.reference.dim(), found: self.phases.len() });
        }
        Symmetry::new(self.order, self.phases.clone())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateEnsemble {
    priors: Vec<f64>,
    states: Vec<HermitianOperator>,
    symmetry: Option<Symmetry>,
}

impl StateEnsemble {
    /// Structural checks only (matching dimensions, at least one state).
    /// Use [`validate`] for the physical invariants.
    pub fn new(priors: Vec<f64>, states: Vec<HermitianOperator>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidParameter("ensemble needs at least one state".into()));
        }
        if priors.len() != states.len() {
            return Err(Error::WrongStateCount { expected: priors.len(), found: states.len() });
        }
        let dim = states[0].dim();
        if let Some(bad) = states.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.dim() });
        }
        Ok(Self { priors, states, symmetry: None })
    }

    /// Attaches a cyclic symmetry after checking `rho_{j+1} = V^j rho_1 V^{†j}`
    /// and equal priors.
    pub fn with_symmetry(mut self, symmetry: Symmetry) -> Result<Self> {
        if symmetry.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: symmetry.dim() });
        }
        if symmetry.order != self.len() {
            return Err(Error::NotSymmetric(format!(
                "symmetry order {} differs from state count {}",
                symmetry.order,
                self.len()
            )));
        }
        let residual = symmetry_residual(&self.states, &symmetry);
        if residual > tol::RECONSTRUCTION.max(tol::HERMITIAN) {
            return Err(Error::NotSymmetric(format!("state covariance residual {residual:.3e}")));
        }
        let n = self.len() as f64;
        if self.priors.iter().any(|&p| (p - 1.0 / n).abs() > tol::PRIOR_SUM.max(1e-12)) {
            return Err(Error::NotSymmetric("priors are not uniform".into()));
        }
        self.symmetry = Some(symmetry);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn states(&self) -> &[HermitianOperator] {
        &self.states
    }

    pub fn symmetry(&self) -> Option<&Symmetry> {
        self.symmetry.as_ref()
    }

    /// `eta_j rho_j`.
    pub fn weighted_state(&self, j: usize) -> HermitianOperator {
        self.states[j].scaled(self.priors[j])
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidEnsemble(report))
        }
    }
}

fn symmetry_residual(states: &[HermitianOperator], symmetry: &Symmetry) -> f64 {
    (1..states.len()).map(|j| symmetry.apply(j, &states[0]).distance(&states[j])).fold(0.0, f64::max)
}

/// `rho = sum_j eta_j rho_j`.
pub fn average_state(e: &StateEnsemble) -> HermitianOperator {
    let mut acc = HermitianOperator::zeros(e.dim());
    for j in 0..e.len() {
        acc = &acc + &e.weighted_state(j);
    }
    acc
}

/// `rho_{j+1} = V^j rho_1 V^{†j}` with priors `1/N`.
pub fn build_symmetric_ensemble(spec: &SymmetrySpec) -> Result<StateEnsemble> {
    let symmetry = spec.symmetry()?;
    let reference = spec.reference.density();
    let states: Vec<_> = (0..spec.order).map(|j| symmetry.apply(j, &reference)).collect();
    let priors = vec![1.0 / spec.order as f64; spec.order];
    let ensemble = StateEnsemble { priors, states, symmetry: None };
    ensemble.ensure_valid()?;
    Ok(StateEnsemble { symmetry: Some(symmetry), ..ensemble })
}

/// `rho_j = p |psi_j><psi_j| + (1 - p) I / d` around a pure symmetric family.
pub fn build_depolarized_family(spec: &SymmetrySpec, p: f64) -> Result<StateEnsemble> {
    let Reference::Pure(coefficients) = &spec.reference else {
        return Err(Error::InvalidParameter("depolarized family needs a pure reference".into()));
    };
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("purity parameter p = {p} outside [0, 1]")));
    }
    if let Some(index) = coefficients.iter().position(|c| c.norm() <= 1e-12) {
        return Err(Error::DegenerateCoefficient { index });
    }
    let d = coefficients.len();
    let pure = HermitianOperator::outer(&CVector::from_vec(coefficients.clone()));
    let reference = &pure.scaled(p) + &HermitianOperator::identity(d).scaled((1.0 - p) / d as f64);
    build_symmetric_ensemble(&SymmetrySpec {
        order: spec.order,
        phases: spec.phases.clone(),
        reference: Reference::Mixed(reference),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    PriorSum { deviation: f64 },
    NegativePrior { index: usize, value: f64 },
    NotPsd { index: usize, min_eigenvalue: f64 },
    Trace { index: usize, deviation: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::PriorSum { deviation } => write!(f, "prior-sum violation {deviation:.3e}"),
            Violation::NegativePrior { index, value } => write!(f, "prior {index} negative ({value:.3e})"),
            Violation::NotPsd { index, min_eigenvalue } => {
                write!(f, "state {index} not PSD (min eigenvalue {min_eigenvalue:.3e})")
            }
            Violation::Trace { index, deviation } => write!(f, "state {index} trace violation {deviation:.3e}"),
        }
    }
}

/// Outcome of [`validate`]; valid iff `violations` is empty.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Rank of the joint support when smaller than the ensemble dimension.
    pub reduced_support: Option<usize>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

pub fn validate(e: &StateEnsemble) -> ValidationReport {
    let mut violations = Vec::new();
    let sum: f64 = e.priors.iter().sum();
    if (sum - 1.0).abs() > tol::PRIOR_SUM {
        violations.push(Violation::PriorSum { deviation: (sum - 1.0).abs() });
    }
    for (index, &value) in e.priors.iter().enumerate() {
        if value < 0.0 {
            violations.push(Violation::NegativePrior { index, value });
        }
    }
    for (index, rho) in e.states.iter().enumerate() {
        let min_eigenvalue = rho.min_eigenvalue();
        if min_eigenvalue < -tol::PSD {
            violations.push(Violation::NotPsd { index, min_eigenvalue });
        }
        let deviation = (rho.trace() - 1.0).abs();
        if deviation > tol::PSD {
            violations.push(Violation::Trace { index, deviation });
        }
    }
    let mut reduced_support = None;
    if violations.is_empty() {
        let joint = e.states.iter().fold(HermitianOperator::zeros(e.dim()), |acc, s| &acc + s);
        if let Ok(p) = support_projector(&joint) {
            let rank = p.trace().round() as usize;
            if rank < e.dim() {
                reduced_support = Some(rank);
            }
        }
    }
    ValidationReport { violations, reduced_support }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    pub(crate) fn trine() -> StateEnsemble {
        let h = 0.5_f64.sqrt();
        build_symmetric_ensemble(&SymmetrySpec::with_default_phases(3, Reference::Pure(vec![c(h), c(h)]))).unwrap()
    }

    #[test]
    fn orthogonal_pair_averages_to_maximally_mixed() {
        let e = StateEnsemble::new(
            vec![0.5, 0.5],
            vec![HermitianOperator::from_diagonal(&[1.0, 0.0]), HermitianOperator::from_diagonal(&[0.0, 1.0])],
        )
        .unwrap();
        assert!(average_state(&e).distance(&HermitianOperator::identity(2).scaled(0.5)) < 1e-15);
    }

    #[test]
    fn single_state_average_is_itself() {
        let rho = HermitianOperator::from_diagonal(&[0.3, 0.7]);
        let e = StateEnsemble::new(vec![1.0], vec![rho.clone()]).unwrap();
        assert!(average_state(&e).distance(&rho) < 1e-15);
    }

    #[test]
    fn symmetric_pure_average_is_diagonal_in_symmetry_basis() {
        let coeffs = vec![C64::new(0.5_f64.sqrt(), 0.0), C64::new(0.0, 0.3_f64.sqrt()), c(0.2_f64.sqrt())];
        let e = build_symmetric_ensemble(&SymmetrySpec::with_default_phases(4, Reference::Pure(coeffs))).unwrap();
        let rho = average_state(&e);
        assert!(rho.distance(&HermitianOperator::from_diagonal(&[0.5, 0.3, 0.2])) < 1e-14);
    }

    #[test]
    fn two_state_reflection() {
        let spec = SymmetrySpec {
            order: 2,
            phases: vec![c(1.0), c(-1.0)],
            reference: Reference::Pure(vec![c(0.8_f64.sqrt()), c(0.2_f64.sqrt())]),
        };
        let e = build_symmetric_ensemble(&spec).unwrap();
        let expected = HermitianOperator::outer(&CVector::from_vec(vec![c(0.8_f64.sqrt()), c(-(0.2_f64.sqrt()))]));
        assert!(e.states()[1].distance(&expected) < 1e-15);
    }

    #[test]
    fn trine_average_is_half_identity() {
        let e = trine();
        assert!(average_state(&e).distance(&HermitianOperator::identity(2).scaled(0.5)) < 1e-14);
        assert!(e.validate().is_valid());
    }

    #[test]
    fn maximally_mixed_reference_is_invariant() {
        let spec =
            SymmetrySpec::with_default_phases(5, Reference::Mixed(HermitianOperator::identity(3).scaled(1.0 / 3.0)));
        let e = build_symmetric_ensemble(&spec).unwrap();
        for s in e.states() {
            assert!(s.distance(&HermitianOperator::identity(3).scaled(1.0 / 3.0)) < 1e-15);
        }
    }

    #[test]
    fn invalid_phases_rejected() {
        let spec = SymmetrySpec {
            order: 3,
            phases: vec![c(1.0), C64::new(0.0, 1.0)],
            reference: Reference::Pure(vec![c(1.0), c(0.0)]),
        };
        assert!(matches!(build_symmetric_ensemble(&spec), Err(Error::InvalidPhases { index: 1, .. })));
    }

    #[test]
    fn depolarized_family_limits() {
        let h = 0.5_f64.sqrt();
        let spec = SymmetrySpec::with_default_phases(4, Reference::Pure(vec![c(h), c(h)]));
        let pure = build_depolarized_family(&spec, 1.0).unwrap();
        assert!(pure.states()[0].distance(&spec.reference.density()) < 1e-15);
        let flat = build_depolarized_family(&spec, 0.0).unwrap();
        assert!(flat.states()[2].distance(&HermitianOperator::identity(2).scaled(0.5)) < 1e-15);
        let half = build_depolarized_family(&spec, 0.5).unwrap();
        assert!(average_state(&half).distance(&HermitianOperator::identity(2).scaled(0.5)) < 1e-14);
    }

    #[test]
    fn depolarized_family_rejects_vanishing_coefficient() {
        let spec = SymmetrySpec::with_default_phases(3, Reference::Pure(vec![c(1.0), c(0.0)]));
        assert!(matches!(build_depolarized_family(&spec, 0.5), Err(Error::DegenerateCoefficient { index: 1 })));
    }

    #[test]
    fn validation_reports_magnitudes() {
        let rho = HermitianOperator::from_diagonal(&[0.5, 0.5]);
        let e = StateEnsemble::new(vec![0.6, 0.6], vec![rho.clone(), rho.clone()]).unwrap();
        let report = e.validate();
        assert_eq!(report.violations.len(), 1);
        match report.violations[0] {
            Violation::PriorSum { deviation } => assert!((deviation - 0.2).abs() < 1e-12),
            ref v => panic!("unexpected {v:?}"),
        }

        let short = HermitianOperator::from_diagonal(&[0.45, 0.45]);
        let e = StateEnsemble::new(vec![0.5, 0.5], vec![rho, short]).unwrap();
        match e.validate().violations.as_slice() {
            [Violation::Trace { index: 1, deviation }] => assert!((deviation - 0.1).abs() < 1e-12),
            v => panic!("unexpected {v:?}"),
        }
    }

    #[test]
    fn reduced_support_is_flagged() {
        let e = StateEnsemble::new(
            vec![0.5, 0.5],
            vec![
                HermitianOperator::from_diagonal(&[1.0, 0.0, 0.0]),
                HermitianOperator::from_diagonal(&[0.0, 1.0, 0.0]),
            ],
        )
        .unwrap();
        let report = e.validate();
        assert!(report.is_valid());
        assert_eq!(report.reduced_support, Some(2));
    }

    #[test]
    fn attaching_wrong_symmetry_fails() {
        let e = StateEnsemble::new(
            vec![0.5, 0.5],
            vec![HermitianOperator::from_diagonal(&[1.0, 0.0]), HermitianOperator::from_diagonal(&[1.0, 0.0])],
        )
        .unwrap();
        let v = Symmetry::new(2, vec![c(1.0), c(-1.0)]).unwrap();
        assert!(e.clone().with_symmetry(v).is_ok());
        let e2 = StateEnsemble::new(
            vec![0.5, 0.5],
            vec![HermitianOperator::from_diagonal(&[1.0, 0.0]), HermitianOperator::from_diagonal(&[0.0, 1.0])],
        )
        .unwrap();
        let v = Symmetry::new(2, vec![c(1.0), c(-1.0)]).unwrap();
        assert!(matches!(e2.with_symmetry(v), Err(Error::NotSymmetric(_))));
    }
}
