//! Maximum-confidence geometry of an ensemble.
//!
//! For `rho = sum eta_j rho_j` the transformed operators
//! `rho~_j = rho^{-1/2} eta_j rho_j rho^{-1/2}` carry the maximum achievable
//! confidence `C_j` as their largest eigenvalue. `Lambda_j` projects onto
//! `rho^{-1/2} P_j`, the only directions a maximum-confidence detection
//! operator for state `j` may occupy.

use rayon::prelude::*;

use crate::ensemble::{average_state, StateEnsemble};
use crate::error::{Error, Result};
use crate::linalg::{op_norm, psd_power, support_basis, support_projector, CMatrix, HermitianOperator};
use crate::tolerances as tol;

#[derive(Clone, Debug)]
pub struct StateGeometry {
    pub confidence: f64,
    pub degeneracy: usize,
    pub transformed: HermitianOperator,
    pub top_projector: HermitianOperator,
    pub support_projector: HermitianOperator,
}

#[derive(Clone, Debug)]
pub struct McGeometry {
    pub states: Vec<StateGeometry>,
    pub average: HermitianOperator,
    pub inv_sqrt: HermitianOperator,
    pub sqrt: HermitianOperator,
    /// Projector onto the span of all `Lambda_j`.
    pub span_projector: HermitianOperator,
}

impl McGeometry {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.average.dim()
    }

    pub fn confidences(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.confidence).collect()
    }

    pub fn lambda(&self, j: usize) -> &HermitianOperator {
        &self.states[j].support_projector
    }
}

/// `rho^{-1/2} eta_j rho_j rho^{-1/2}` for each state, inverse taken on the support.
pub fn transformed_states(e: &StateEnsemble) -> Result<Vec<HermitianOperator>> {
    let inv_sqrt = psd_power(&average_state(e), -0.5)?;
    Ok((0..e.len()).map(|j| e.weighted_state(j).sandwiched(&inv_sqrt)).collect())
}

pub fn geometry(e: &StateEnsemble) -> Result<McGeometry> {
    let average = average_state(e);
    let inv_sqrt = psd_power(&average, -0.5)?;
    let inv = psd_power(&average, -1.0)?;
    let sqrt = psd_power(&average, 0.5)?;
    let kappa = condition_number(&average);
    let states = (0..e.len())
        .into_par_iter()
        .map(|j| state_geometry(&e.weighted_state(j), &inv_sqrt, &inv, kappa))
        .collect::<Result<Vec<_>>>()?;
    let mut stacked = HermitianOperator::zeros(average.dim());
    for s in &states {
        stacked = &stacked + &s.support_projector;
    }
    let span_projector = support_projector(&stacked)?;
    Ok(McGeometry { states, average, inv_sqrt, sqrt, span_projector })
}

fn condition_number(rho: &HermitianOperator) -> f64 {
    let spec = rho.eig();
    let support = spec.support_indices();
    match (support.first(), support.last()) {
        (Some(&a), Some(&b)) => spec.eigenvalues[a] / spec.eigenvalues[b],
        _ => 1.0,
    }
}

fn state_geometry(
    weighted: &HermitianOperator,
    inv_sqrt: &HermitianOperator,
    inv: &HermitianOperator,
    kappa: f64,
) -> Result<StateGeometry> {
    let transformed = weighted.sandwiched(inv_sqrt);
    let spec = transformed.eig();
    let confidence = spec.eigenvalues[0];
    if confidence <= 0.0 {
        return Err(Error::InfeasibleInput("state has no weight on the support of the average state".into()));
    }
    let gap = tol::DEGENERACY_REL * confidence;
    let top: Vec<usize> = (0..spec.dim()).filter(|&k| confidence - spec.eigenvalues[k] <= gap).collect();
    let degeneracy = top.len();
    let nu = spec.vectors(top.iter().copied());
    let top_projector = HermitianOperator::projector_onto(&nu);

    let inner = psd_power(&inv.sandwiched(&top_projector), -1.0)?;
    let support_projector = inner.sandwiched(inv_sqrt);

    let span = span_projector(&(inv_sqrt.matrix() * &nu));
    let mismatch = support_projector.distance(&span);
    let allowed = tol::RECONSTRUCTION * kappa.max(1.0);
    if mismatch > allowed {
        return Err(Error::Internal(format!("support projector disagrees with span construction by {mismatch:.3e}")));
    }
    Ok(StateGeometry { confidence: confidence.min(1.0), degeneracy, transformed, top_projector, support_projector })
}

/// Orthogonal projector onto the column span of `m`.
fn span_projector(m: &CMatrix) -> HermitianOperator {
    let gram = HermitianOperator::from_matrix(m * m.adjoint());
    support_projector(&gram).expect("Gram matrix is PSD")
}

/// Restriction of an ensemble to the span `Lambda` of all `Lambda_j`.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub ensemble: StateEnsemble,
    /// `Tr(rho Lambda)`, so that `R = scale * R'`.
    pub scale: f64,
    /// Isometry from the reduced space into the original one; `None` when unchanged.
    pub embedding: Option<CMatrix>,
}

pub fn reduce_to_support(e: &StateEnsemble, g: &McGeometry) -> Result<Reduction> {
    let d = e.dim();
    if g.span_projector.distance(&HermitianOperator::identity(d)) <= tol::RECONSTRUCTION {
        return Ok(Reduction { ensemble: e.clone(), scale: 1.0, embedding: None });
    }
    let w = support_basis(&g.span_projector)?;
    let lambda = &g.span_projector;
    let scale = g.average.trace_product(lambda);
    let mut priors = Vec::with_capacity(e.len());
    let mut states = Vec::with_capacity(e.len());
    for j in 0..e.len() {
        let t = e.states()[j].trace_product(lambda);
        let restricted = HermitianOperator::from_matrix(w.adjoint() * e.states()[j].matrix() * &w);
        priors.push(e.priors()[j] * t / scale);
        states.push(if t > 0.0 { restricted.scaled(1.0 / t) } else { restricted });
    }
    let ensemble = StateEnsemble::new(priors, states)?;
    Ok(Reduction { ensemble, scale, embedding: Some(w) })
}

#[derive(Clone, Debug)]
pub struct UnambiguousReport {
    pub unambiguous: bool,
    /// `max_{k != j} ||Lambda_k rho_j||`.
    pub cross_support: f64,
    /// `max_{k != j} ||P_k P_j||`.
    pub projector_overlap: f64,
}

pub fn is_unambiguous(g: &McGeometry, e: &StateEnsemble) -> UnambiguousReport {
    let unambiguous = g.states.iter().all(|s| (1.0 - s.confidence).abs() <= tol::CONFIDENCE);
    let mut cross_support = 0.0_f64;
    let mut projector_overlap = 0.0_f64;
    if unambiguous {
        for (k, sk) in g.states.iter().enumerate() {
            for (j, sj) in g.states.iter().enumerate() {
                if j == k {
                    continue;
                }
                cross_support = cross_support.max(op_norm(&(&sk.support_projector * &e.states()[j])));
                projector_overlap = projector_overlap.max(op_norm(&(&sk.top_projector * &sj.top_projector)));
            }
        }
    }
    UnambiguousReport { unambiguous, cross_support, projector_overlap }
}

#[derive(Clone, Debug)]
pub struct SigmaMapping {
    /// Unit-trace `sigma'_j`.
    pub states: [HermitianOperator; 2],
    /// `Tr sigma_j`.
    pub weights: [f64; 2],
    /// `max_j ||sigma_j - rho^{1/2} P_j rho^{1/2}||`.
    pub projector_residual: f64,
    /// `||sigma_1 + sigma_2 - rho||`.
    pub sum_residual: f64,
}

/// Two-state problem rewritten as unambiguous discrimination of `sigma'_1, sigma'_2`
/// with priors `Tr sigma_j`, where `sigma_j = rho^{1/2} P_j rho^{1/2}`. Since
/// `rho~_1 = (C_1 + C_2 - 1) P_1 + (1 - C_2) I` on the support,
/// `sigma_1 = [eta_1 rho_1 C_2 - eta_2 rho_2 (1 - C_2)] / (C_1 + C_2 - 1)` and symmetrically for `sigma_2`.
pub fn n2_sigma_mapping(e: &StateEnsemble, g: &McGeometry) -> Result<SigmaMapping> {
    if e.len() != 2 {
        return Err(Error::WrongStateCount { expected: 2, found: e.len() });
    }
    let support = support_projector(&g.average)?;
    let residual = (&g.states[0].top_projector + &g.states[1].top_projector).distance(&support);
    if residual > tol::RECONSTRUCTION.max(1e-8) {
        return Err(Error::NotStandardForm { residual });
    }
    let (c1, c2) = (g.states[0].confidence, g.states[1].confidence);
    let denominator = c1 + c2 - 1.0;
    if denominator <= tol::CONFIDENCE {
        return Err(Error::DegenerateMapping { denominator });
    }
    let (a, b) = (e.weighted_state(0), e.weighted_state(1));
    let s1 = (&a.scaled(c2) - &b.scaled(1.0 - c2)).scaled(1.0 / denominator);
    let s2 = (&b.scaled(c1) - &a.scaled(1.0 - c1)).scaled(1.0 / denominator);
    let projector_residual = [&s1, &s2]
        .iter()
        .zip(&g.states)
        .map(|(s, st)| s.distance(&st.top_projector.sandwiched(&g.sqrt)))
        .fold(0.0, f64::max);
    let sum_residual = (&s1 + &s2).distance(&g.average);
    let weights = [s1.trace(), s2.trace()];
    let states = [s1.scaled(1.0 / weights[0]), s2.scaled(1.0 / weights[1])];
    Ok(SigmaMapping { states, weights, projector_residual, sum_residual })
}
