//! Failure-probability minimisation under the maximum-confidence constraint.
//!
//! A detection set `Pi_0, ..., Pi_N` is optimal iff some `Z` satisfies the
//! positivity conditions `Z >= 0`, `Lambda_j (Z - rho) Lambda_j >= 0` together
//! with the slackness equalities `Z Pi_0 = 0`, `Lambda_j (Z - rho) Pi_j = 0`.
//! Both solvers return such a certificate alongside the measurement.

mod certificate;
mod numeric;
mod rank1;
mod witness;

pub use certificate::{duality_identity, verify_certificate, DualityIdentity, OptimalityCertificate};
pub use numeric::{solve_numeric, SolverOptions};
pub use rank1::solve_rank1_symmetric;
pub use witness::{perturbation_witness, witness_fit, WitnessCase, WitnessFit, WitnessReport};

use crate::ensemble::{average_state, StateEnsemble};
use crate::error::{Error, Result};
use crate::geometry::McGeometry;
use crate::linalg::HermitianOperator;
use crate::tolerances as tol;

/// `Pi_0` (inconclusive) followed by one detection operator per state.
#[derive(Clone, Debug, PartialEq)]
pub struct DetectionSet {
    operators: Vec<HermitianOperator>,
}

impl DetectionSet {
    pub fn new(operators: Vec<HermitianOperator>) -> Result<Self> {
        if operators.len() < 2 {
            return Err(Error::InvalidParameter("a detection set needs Pi_0 and at least one outcome".into()));
        }
        let dim = operators[0].dim();
        if let Some(bad) = operators.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.dim() });
        }
        Ok(Self { operators })
    }

    /// Completes `Pi_1..Pi_N` with `Pi_0 = I - sum_j Pi_j`.
    pub fn from_conclusive(conclusive: Vec<HermitianOperator>) -> Result<Self> {
        let dim = conclusive.first().ok_or_else(|| Error::InvalidParameter("no conclusive outcomes".into()))?.dim();
        let sum = conclusive.iter().fold(HermitianOperator::zeros(dim), |a, p| &a + p);
        let mut operators = vec![&HermitianOperator::identity(dim) - &sum];
        operators.extend(conclusive);
        Self::new(operators)
    }

    pub fn dim(&self) -> usize {
        self.operators[0].dim()
    }

    /// Number of conclusive outcomes.
    pub fn outcomes(&self) -> usize {
        self.operators.len() - 1
    }

    pub fn operators(&self) -> &[HermitianOperator] {
        &self.operators
    }

    pub fn failure(&self) -> &HermitianOperator {
        &self.operators[0]
    }

    /// Detection operator of state `j` (zero-based).
    pub fn conclusive(&self, j: usize) -> &HermitianOperator {
        &self.operators[j + 1]
    }

    pub fn check(&self, g: &McGeometry) -> DetectionCheck {
        let d = self.dim();
        let sum = self.operators.iter().fold(HermitianOperator::zeros(d), |a, p| &a + p);
        let completeness = sum.distance(&HermitianOperator::identity(d));
        let min_eigenvalue = self.operators.iter().map(|p| p.min_eigenvalue()).fold(f64::INFINITY, f64::min);
        let support = (0..self.outcomes().min(g.len()))
            .map(|j| {
                let p = self.conclusive(j);
                p.distance(&p.sandwiched(g.lambda(j)))
            })
            .fold(0.0, f64::max);
        DetectionCheck { completeness, min_eigenvalue, support }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetectionCheck {
    /// `||sum_j Pi_j - I||`.
    pub completeness: f64,
    pub min_eigenvalue: f64,
    /// `max_j ||Pi_j - Lambda_j Pi_j Lambda_j||`.
    pub support: f64,
}

impl DetectionCheck {
    pub fn is_valid(&self, tolerance: f64) -> bool {
        self.completeness <= tolerance && self.min_eigenvalue >= -tolerance && self.support <= tolerance
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeStatistics {
    /// `Tr(rho Pi_j)` per conclusive outcome.
    pub outcome_probabilities: Vec<f64>,
    /// `eta_j Tr(rho_j Pi_j) / Tr(rho Pi_j)`; `None` where the outcome never fires.
    pub confidences: Vec<Option<f64>>,
    pub failure: f64,
    pub rate: f64,
    pub p_corr: f64,
}

impl OutcomeStatistics {
    /// Outcomes whose confidence is undefined.
    pub fn zero_probability(&self) -> Vec<usize> {
        (0..self.confidences.len()).filter(|&j| self.confidences[j].is_none()).collect()
    }
}

pub fn evaluate_measurement(e: &StateEnsemble, d: &DetectionSet) -> Result<OutcomeStatistics> {
    if d.outcomes() != e.len() {
        return Err(Error::WrongStateCount { expected: e.len(), found: d.outcomes() });
    }
    if d.dim() != e.dim() {
        return Err(Error::DimensionMismatch { expected: e.dim(), found: d.dim() });
    }
    let rho = average_state(e);
    let mut outcome_probabilities = Vec::with_capacity(e.len());
    let mut confidences = Vec::with_capacity(e.len());
    let mut p_corr = 0.0;
    for j in 0..e.len() {
        let p = rho.trace_product(d.conclusive(j));
        let correct = e.weighted_state(j).trace_product(d.conclusive(j));
        p_corr += correct;
        outcome_probabilities.push(p);
        confidences.push((p >= tol::OUTCOME_PROBABILITY).then(|| correct / p));
    }
    let failure = rho.trace_product(d.failure());
    Ok(OutcomeStatistics {
        rate: outcome_probabilities.iter().sum(),
        outcome_probabilities,
        confidences,
        failure,
        p_corr,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMode {
    Analytic,
    Numeric,
}

impl SolveMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveMode::Analytic => "analytic",
            SolveMode::Numeric => "numeric",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverMetadata {
    pub mode: SolveMode,
    /// Newton iterations for the numeric solver, zero for closed forms.
    pub iterations: usize,
    pub restarts: usize,
    /// `Tr(rho Lambda)` of the standard-form reduction.
    pub scale: f64,
    /// Rate of the reduced problem, `R / scale`.
    pub reduced_rate: f64,
    /// Whether the complementary-slackness refinement produced the returned point.
    pub polished: bool,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub rate: f64,
    pub failure: f64,
    /// Maximum confidences `C_j` from the geometry.
    pub max_confidences: Vec<f64>,
    pub statistics: OutcomeStatistics,
    pub detection: DetectionSet,
    pub certificate: OptimalityCertificate,
    pub metadata: SolverMetadata,
}

impl SolveReport {
    pub fn certified(&self) -> bool {
        self.certificate.accepted
    }

    pub fn p_corr(&self) -> f64 {
        self.statistics.p_corr
    }

    /// Largest `|achieved - C_j|` over outcomes that fire.
    pub fn confidence_deviation(&self) -> f64 {
        self.statistics
            .confidences
            .iter()
            .zip(&self.max_confidences)
            .filter_map(|(a, c)| a.map(|a| (a - c).abs()))
            .fold(0.0, f64::max)
    }

    pub(crate) fn assemble(
        e: &StateEnsemble,
        g: &McGeometry,
        detection: DetectionSet,
        z: HermitianOperator,
        metadata: SolverMetadata,
    ) -> Result<Self> {
        let statistics = evaluate_measurement(e, &detection)?;
        let certificate = verify_certificate(e, g, &detection, &z);
        Ok(Self {
            rate: statistics.rate,
            failure: 1.0 - statistics.rate,
            max_confidences: g.confidences(),
            statistics,
            detection,
            certificate,
            metadata,
        })
    }
}
