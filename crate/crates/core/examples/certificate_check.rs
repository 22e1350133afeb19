//! Checking a proposed (measurement, Z) pair by hand, and the identity that
//! links `Tr Z - R` to the slackness terms for any `Z`.

use maxconf::ensemble::{build_symmetric_ensemble, Reference, SymmetrySpec};
use maxconf::geometry::geometry;
use maxconf::linalg::{HermitianOperator, C64};
use maxconf::optimizer::{duality_identity, verify_certificate, DetectionSet};

fn main() -> maxconf::error::Result<()> {
    let h = C64::new(0.5_f64.sqrt(), 0.0);
    let e = build_symmetric_ensemble(&SymmetrySpec::with_default_phases(3, Reference::Pure(vec![h, h])))?;
    let g = geometry(&e)?;
    let d = DetectionSet::from_conclusive(e.states().iter().map(|s| s.scaled(2.0 / 3.0)).collect())?;

    for scale in [0.5, 0.45, 0.6] {
        let z = HermitianOperator::identity(2).scaled(scale);
        let cert = verify_certificate(&e, &g, &d, &z);
        let id = duality_identity(&g, &d, &z);
        println!(
            "Z = {scale} I: accepted={} trace gap={:+.3e} worst residual={:.3e} identity residual={:.1e}",
            cert.accepted,
            cert.trace_gap,
            cert.worst_residual(),
            id.residual()
        );
        for f in cert.failures() {
            println!("    {f}");
        }
    }
    Ok(())
}
