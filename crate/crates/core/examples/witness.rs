//! Perturbation witnesses for candidate certificates with a negative eigenvalue.
//!
//! `Z = I/2 + t sigma_z` keeps every slackness equality of the trine but is
//! not positive once `t > 1/2`. The deformed measurement confirms the
//! `-2 eps mu` leading term, yet it leaves the `Lambda_j` supports, so `Tr Z - R'`
//! stays positive: `Tr Z = 1` still bounds every rate. The second part
//! adds a third, orthogonal state that is never detected; there the deformation
//! stays feasible and `Tr Z - R'` itself goes negative.

use maxconf::ensemble::{build_symmetric_ensemble, Reference, StateEnsemble, SymmetrySpec};
use maxconf::geometry::geometry;
use maxconf::linalg::{CMatrix, HermitianOperator, C64};
use maxconf::optimizer::{witness_fit, DetectionSet, WitnessFit};

fn show(label: &str, fit: &WitnessFit) {
    let w = &fit.reports[0];
    println!(
        "{label}: case={:?} mu={:.6} gap={:+.4e} predicted={:+.4e} Tr Z - R'={:+.4e} feasible={} k={:.3} leading order ok={}",
        w.case, w.mu, w.gap, w.predicted, w.primed_trace_gap, w.support_preserved, fit.k, fit.within
    );
}

/// `m` embedded in the top-left block of a 3x3 matrix.
fn embed(m: &HermitianOperator) -> HermitianOperator {
    let mut out = CMatrix::zeros(3, 3);
    out.view_mut((0, 0), (2, 2)).copy_from(m.matrix());
    HermitianOperator::new(out).unwrap()
}

fn main() -> maxconf::error::Result<()> {
    let h = C64::new(0.5_f64.sqrt(), 0.0);
    let e = build_symmetric_ensemble(&SymmetrySpec::with_default_phases(3, Reference::Pure(vec![h, h])))?;
    let g = geometry(&e)?;
    let d = DetectionSet::from_conclusive(e.states().iter().map(|s| s.scaled(2.0 / 3.0)).collect())?;
    let sz = HermitianOperator::from_diagonal(&[1.0, -1.0]);

    for mu in [0.01, 0.05, 0.1] {
        let z = &HermitianOperator::identity(2).scaled(0.5) + &sz.scaled(0.5 + mu);
        show(&format!("trine, mu={mu}"), &witness_fit(&e, &g, &d, &z, [1e-3, 1e-4])?);
    }

    for mu in [0.01, 0.05, 0.1] {
        let mut states: Vec<HermitianOperator> = e.states().iter().map(embed).collect();
        states.push(HermitianOperator::from_diagonal(&[0.0, 0.0, 1.0]));
        let w = (1.0 - mu) / 3.0;
        let big = StateEnsemble::new(vec![w, w, w, mu], states)?;
        let gb = geometry(&big)?;
        let mut conclusive: Vec<HermitianOperator> = (0..3).map(|j| embed(d.conclusive(j))).collect();
        conclusive.push(HermitianOperator::zeros(3));
        let db = DetectionSet::from_conclusive(conclusive)?;
        let z = embed(&HermitianOperator::identity(2).scaled(0.5 * (1.0 - mu)));
        show(&format!("trine + undetected state, mu={mu}"), &witness_fit(&big, &gb, &db, &z, [1e-3, 1e-4])?);
    }
    Ok(())
}
