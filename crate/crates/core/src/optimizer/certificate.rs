use crate::ensemble::StateEnsemble;
use crate::geometry::McGeometry;
use crate::linalg::{numeric_rank, op_norm, HermitianOperator};
use crate::tolerances as tol;

use super::{DetectionCheck, DetectionSet};

/// Residuals of the optimality conditions for a pair `(D, Z)`.
#[derive(Clone, Debug)]
pub struct OptimalityCertificate {
    pub z: HermitianOperator,
    pub min_eigenvalue_z: f64,
    /// Smallest eigenvalue of `Lambda_j (Z - rho) Lambda_j`.
    pub support_min_eigenvalues: Vec<f64>,
    /// Smallest eigenvalue of `Lambda_j (Z - eta_j rho_j / C_j) Lambda_j`.
    pub scaled_support_min_eigenvalues: Vec<f64>,
    /// `||Z Pi_0||`.
    pub failure_slackness: f64,
    /// `||Lambda_j (Z - rho) Pi_j||`.
    pub slackness: Vec<f64>,
    /// `||Lambda_j (Z - eta_j rho_j / C_j) Pi_j||`.
    pub scaled_slackness: Vec<f64>,
    /// Largest disagreement between the two forms of the sandwiched operator.
    pub form_disagreement: f64,
    pub trace_z: f64,
    /// `sum_j Tr(rho Lambda_j Pi_j Lambda_j)`.
    pub rate: f64,
    /// `Tr Z - R`.
    pub trace_gap: f64,
    /// Rank of `Pi_0` restricted to the span of the `Lambda_j`.
    pub failure_rank: usize,
    /// `rank(Lambda) - max_j rank(Lambda_j rho_j Lambda_j)`.
    pub failure_rank_bound: usize,
    pub detection: DetectionCheck,
    pub accepted: bool,
}

impl OptimalityCertificate {
    pub fn positivity_ok(&self) -> bool {
        let floor = -tol::CERT_POSITIVITY;
        self.min_eigenvalue_z >= floor
            && self.support_min_eigenvalues.iter().all(|&x| x >= floor)
            && self.scaled_support_min_eigenvalues.iter().all(|&x| x >= floor)
    }

    pub fn equalities_ok(&self) -> bool {
        let cap = tol::CERT_EQUALITY;
        self.failure_slackness <= cap
            && self.slackness.iter().all(|&x| x <= cap)
            && self.scaled_slackness.iter().all(|&x| x <= cap)
            && self.form_disagreement <= cap
            && self.trace_gap.abs() <= cap
    }

    pub fn rank_ok(&self) -> bool {
        self.failure_rank <= self.failure_rank_bound
    }

    /// Largest violation over all conditions, zero when everything holds exactly.
    pub fn worst_residual(&self) -> f64 {
        let neg = |x: f64| (-x).max(0.0);
        let mut worst = neg(self.min_eigenvalue_z).max(self.failure_slackness).max(self.form_disagreement);
        worst = worst.max(self.trace_gap.abs());
        for v in self.support_min_eigenvalues.iter().chain(&self.scaled_support_min_eigenvalues) {
            worst = worst.max(neg(*v));
        }
        for v in self.slackness.iter().chain(&self.scaled_slackness) {
            worst = worst.max(*v);
        }
        worst
    }

    /// Names of the conditions that fail.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.min_eigenvalue_z < -tol::CERT_POSITIVITY {
            out.push(format!("Z has negative eigenvalue {:.3e}", self.min_eigenvalue_z));
        }
        for (j, &v) in self.support_min_eigenvalues.iter().enumerate() {
            if v < -tol::CERT_POSITIVITY {
                out.push(format!("Lambda_{0}(Z-rho)Lambda_{0} has negative eigenvalue {v:.3e}", j + 1));
            }
        }
        for (j, &v) in self.scaled_support_min_eigenvalues.iter().enumerate() {
            if v < -tol::CERT_POSITIVITY {
                out.push(format!("Lambda_{0}(Z-eta rho_{0}/C_{0})Lambda_{0} has negative eigenvalue {v:.3e}", j + 1));
            }
        }
        if self.failure_slackness > tol::CERT_EQUALITY {
            out.push(format!("||Z Pi_0|| = {:.3e}", self.failure_slackness));
        }
        for (j, &v) in self.slackness.iter().enumerate() {
            if v > tol::CERT_EQUALITY {
                out.push(format!("||Lambda_{0}(Z-rho)Pi_{0}|| = {v:.3e}", j + 1));
            }
        }
        for (j, &v) in self.scaled_slackness.iter().enumerate() {
            if v > tol::CERT_EQUALITY {
                out.push(format!("||Lambda_{0}(Z-eta rho_{0}/C_{0})Pi_{0}|| = {v:.3e}", j + 1));
            }
        }
        if self.form_disagreement > tol::CERT_EQUALITY {
            out.push(format!("sandwiched forms disagree by {:.3e}", self.form_disagreement));
        }
        if self.trace_gap.abs() > tol::CERT_EQUALITY {
            out.push(format!("Tr Z - R = {:.3e}", self.trace_gap));
        }
        if !self.rank_ok() {
            out.push(format!("rank Pi_0 = {} exceeds bound {}", self.failure_rank, self.failure_rank_bound));
        }
        if !self.detection.is_valid(tol::CERT_EQUALITY) {
            out.push(format!(
                "detection set invalid (completeness {:.3e}, min eigenvalue {:.3e}, support {:.3e})",
                self.detection.completeness, self.detection.min_eigenvalue, self.detection.support
            ));
        }
        out
    }
}

pub fn verify_certificate(
    e: &StateEnsemble,
    g: &McGeometry,
    d: &DetectionSet,
    z: &HermitianOperator,
) -> OptimalityCertificate {
    let rho = &g.average;
    let z_minus_rho = z - rho;
    let n = e.len().min(d.outcomes());
    let mut support_min_eigenvalues = Vec::with_capacity(n);
    let mut scaled_support_min_eigenvalues = Vec::with_capacity(n);
    let mut slackness = Vec::with_capacity(n);
    let mut scaled_slackness = Vec::with_capacity(n);
    let mut form_disagreement = 0.0_f64;
    let mut rate = 0.0;
    let mut max_state_rank = 0;
    for j in 0..n {
        let lambda = g.lambda(j);
        let pi = d.conclusive(j);
        let scaled = z - &e.weighted_state(j).scaled(1.0 / g.states[j].confidence);
        let a = z_minus_rho.sandwiched(lambda);
        let b = scaled.sandwiched(lambda);
        support_min_eigenvalues.push(a.min_eigenvalue());
        scaled_support_min_eigenvalues.push(b.min_eigenvalue());
        form_disagreement = form_disagreement.max(a.distance(&b));
        slackness.push(op_norm(&(lambda.matrix() * z_minus_rho.matrix() * pi.matrix())));
        scaled_slackness.push(op_norm(&(lambda.matrix() * scaled.matrix() * pi.matrix())));
        rate += rho.trace_product(&pi.sandwiched(lambda));
        max_state_rank = max_state_rank.max(numeric_rank(&e.states()[j].sandwiched(lambda), tol::CERT_RANK_REL));
    }
    let trace_z = z.trace();
    let span_rank = g.span_projector.trace().round() as usize;
    let failure_rank = numeric_rank(&d.failure().sandwiched(&g.span_projector), tol::CERT_RANK_REL);
    let detection = d.check(g);
    let mut cert = OptimalityCertificate {
        z: z.clone(),
        min_eigenvalue_z: z.min_eigenvalue(),
        support_min_eigenvalues,
        scaled_support_min_eigenvalues,
        failure_slackness: op_norm(&(z * d.failure())),
        slackness,
        scaled_slackness,
        form_disagreement,
        trace_z,
        rate,
        trace_gap: trace_z - rate,
        failure_rank,
        failure_rank_bound: span_rank.saturating_sub(max_state_rank),
        detection,
        accepted: false,
    };
    cert.accepted = n == e.len()
        && cert.positivity_ok()
        && cert.equalities_ok()
        && cert.rank_ok()
        && detection.is_valid(tol::CERT_EQUALITY);
    cert
}

/// Both sides of `Tr Z - R = Tr(Z Pi_0) + sum_j Tr[Lambda_j (Z - rho) Lambda_j Pi_j]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualityIdentity {
    pub lhs: f64,
    pub rhs: f64,
}

impl DualityIdentity {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

pub fn duality_identity(g: &McGeometry, d: &DetectionSet, z: &HermitianOperator) -> DualityIdentity {
    let rho = &g.average;
    let z_minus_rho = z - rho;
    let mut rate = 0.0;
    let mut rhs = z.trace_product(d.failure());
    for j in 0..d.outcomes().min(g.len()) {
        let lambda = g.lambda(j);
        let pi = d.conclusive(j);
        rate += rho.trace_product(&pi.sandwiched(lambda));
        rhs += z_minus_rho.sandwiched(lambda).trace_product(pi);
    }
    DualityIdentity { lhs: z.trace() - rate, rhs }
}
