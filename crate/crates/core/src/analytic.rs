//! Closed forms for symmetric families.
//!
//! Every family is `rho_j = p |psi_j><psi_j| + (1 - p) I / d` with
//! `|psi_j> = V^{j-1} |psi_1>`, `V = diag(exp(2 pi i l / N))` and
//! `|psi_1> = sum_l c_l |l>`. These evaluators never touch the solvers and
//! serve as independent references for them.

use crate::ensemble::{build_depolarized_family, Reference, StateEnsemble, Symmetry, SymmetrySpec};
use crate::error::{Error, Result};
use crate::linalg::{CVector, HermitianOperator, C64};

const NORM_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricFamilyParams {
    pub order: usize,
    pub purity: f64,
    pub coefficients: Vec<C64>,
}

impl SymmetricFamilyParams {
    pub fn new(order: usize, purity: f64, coefficients: Vec<C64>) -> Result<Self> {
        let norm: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidParameter(format!("coefficients have squared norm {norm}")));
        }
        if let Some(index) = coefficients.iter().position(|c| c.norm() <= NORM_TOL) {
            return Err(Error::DegenerateCoefficient { index });
        }
        if !(0.0..=1.0).contains(&purity) {
            return Err(Error::InvalidParameter(format!("purity {purity} outside [0, 1]")));
        }
        if order == 0 {
            return Err(Error::InvalidParameter("N must be positive".into()));
        }
        Ok(Self { order, purity, coefficients })
    }

    pub fn pure(order: usize, coefficients: Vec<C64>) -> Result<Self> {
        Self::new(order, 1.0, coefficients)
    }

    /// `c = (cos(gamma/2), sin(gamma/2))`.
    pub fn qubit(order: usize, purity: f64, gamma: f64) -> Result<Self> {
        let c = vec![C64::new((gamma / 2.0).cos(), 0.0), C64::new((gamma / 2.0).sin(), 0.0)];
        Self::new(order, purity, c)
    }

    /// `c_l = 1 / sqrt(d)`.
    pub fn flat(order: usize, dim: usize, purity: f64) -> Result<Self> {
        let c = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Self::new(order, purity, vec![c; dim])
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn spec(&self) -> SymmetrySpec {
        SymmetrySpec::with_default_phases(self.order, Reference::Pure(self.coefficients.clone()))
    }

    pub fn ensemble(&self) -> Result<StateEnsemble> {
        build_depolarized_family(&self.spec(), self.purity)
    }

    fn min_weight(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).fold(f64::INFINITY, f64::min)
    }

    /// `|psi_j>` for `j = 0..N`.
    fn pure_states(&self) -> Vec<CVector> {
        let phases = Symmetry::default_phases(self.order, self.dim());
        (0..self.order)
            .map(|j| {
                CVector::from_iterator(
                    self.dim(),
                    self.coefficients.iter().zip(&phases).map(|(c, v)| c * v.powu(j as u32)),
                )
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct AnalyticSolution {
    pub confidence: f64,
    pub failure: f64,
    pub alpha: f64,
    /// `Pi_1..Pi_N`, when the family has a closed form for them.
    pub detection: Option<Vec<HermitianOperator>>,
}

impl AnalyticSolution {
    pub fn p_corr(&self) -> f64 {
        self.confidence * (1.0 - self.failure)
    }
}

pub fn pure_symmetric_solution(params: &SymmetricFamilyParams) -> Result<AnalyticSolution> {
    if params.purity != 1.0 {
        return Err(Error::InvalidParameter("pure family requires p = 1".into()));
    }
    let (n, d) = (params.order as f64, params.dim() as f64);
    if params.order < params.dim() {
        return Err(Error::InvalidParameter("pure family requires N >= d".into()));
    }
    let m = params.min_weight();
    let weights: Vec<f64> = params.coefficients.iter().map(|c| c.norm_sqr()).collect();
    let detection = params
        .pure_states()
        .into_iter()
        .map(|psi| {
            let v = CVector::from_iterator(psi.len(), psi.iter().zip(&weights).map(|(x, w)| x / *w));
            HermitianOperator::outer(&v).scaled(m / n)
        })
        .collect();
    Ok(AnalyticSolution {
        confidence: d / n,
        failure: (1.0 - d * m).max(0.0),
        alpha: d * m / n,
        detection: Some(detection),
    })
}

pub fn qubit_mixed_solution(params: &SymmetricFamilyParams) -> Result<AnalyticSolution> {
    if params.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: params.dim() });
    }
    let c1 = params.coefficients[0].norm();
    let c2 = params.coefficients[1].norm();
    // |c1| = cos(gamma/2), |c2| = sin(gamma/2)
    qubit_formula(params.order, params.purity, c1 * c1 - c2 * c2, 2.0 * c1 * c2)
}

/// Qubit family evaluated directly at `gamma`, including the endpoint `gamma = 0`
/// where the states coincide and no ensemble parameters exist.
pub fn qubit_closed_form(order: usize, purity: f64, gamma: f64) -> Result<AnalyticSolution> {
    if !(0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&gamma) {
        return Err(Error::InvalidParameter(format!("gamma = {gamma} outside [0, pi/2]")));
    }
    qubit_formula(order, purity, gamma.cos(), gamma.sin())
}

fn qubit_formula(order: usize, p: f64, cos_g: f64, sin_g: f64) -> Result<AnalyticSolution> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!("qubit family requires 0 < p <= 1, got {p}")));
    }
    if order == 0 {
        return Err(Error::InvalidParameter("N must be positive".into()));
    }
    let n = order as f64;
    let lift = if sin_g == 0.0 { 0.0 } else { p * sin_g / (1.0 - p * p * cos_g * cos_g).sqrt() };
    let min_weight = (1.0 - cos_g.abs()) / 2.0;
    Ok(AnalyticSolution {
        confidence: (1.0 + lift) / n,
        failure: p * cos_g.abs(),
        alpha: (1.0 - p + 2.0 * p * min_weight) / n,
        detection: None,
    })
}

pub fn flat_mixed_solution(params: &SymmetricFamilyParams) -> Result<AnalyticSolution> {
    let d = params.dim() as f64;
    if params.coefficients.iter().any(|c| (c.norm_sqr() - 1.0 / d).abs() > NORM_TOL) {
        return Err(Error::InvalidParameter("flat family requires |c_l| = 1/sqrt(d)".into()));
    }
    let n = params.order as f64;
    let p = params.purity;
    let detection = params.pure_states().iter().map(|psi| HermitianOperator::outer(psi).scaled(d / n)).collect();
    Ok(AnalyticSolution {
        confidence: (1.0 + p * (d - 1.0)) / n,
        failure: 0.0,
        alpha: 1.0 / n,
        detection: Some(detection),
    })
}

#[derive(Clone, Debug)]
pub struct SquareRootMeasurement {
    /// `Pi_1..Pi_N`.
    pub detection: Vec<HermitianOperator>,
    /// Confidence of every outcome.
    pub confidence: f64,
    /// Maximum confidence of the family, for comparison.
    pub max_confidence: f64,
}

pub fn square_root_measurement(params: &SymmetricFamilyParams) -> Result<SquareRootMeasurement> {
    if params.purity != 1.0 {
        return Err(Error::InvalidParameter("square-root measurement comparison requires p = 1".into()));
    }
    let (n, d) = (params.order as f64, params.dim() as f64);
    let moduli: Vec<f64> = params.coefficients.iter().map(|c| c.norm()).collect();
    let detection = params
        .pure_states()
        .into_iter()
        .map(|psi| {
            let v = CVector::from_iterator(psi.len(), psi.iter().zip(&moduli).map(|(x, m)| x / *m));
            HermitianOperator::outer(&v).scaled(1.0 / n)
        })
        .collect();
    let max_confidence = d / n;
    let sum: f64 = moduli.iter().sum();
    Ok(SquareRootMeasurement { detection, confidence: max_confidence / d * sum * sum, max_confidence })
}
