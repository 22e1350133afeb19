//! Three symmetric qubit states at 120 degrees: maximum confidence 2/3,
//! no inconclusive outcomes, and the certificate `Z = I/2`.
//!
//! ```bash
//! cargo run --example trine
//! ```

use maxconf::ensemble::{build_symmetric_ensemble, Reference, SymmetrySpec};
use maxconf::geometry::geometry;
use maxconf::linalg::C64;
use maxconf::optimizer::solve_rank1_symmetric;

fn main() -> maxconf::error::Result<()> {
    let h = C64::new(0.5_f64.sqrt(), 0.0);
    let spec = SymmetrySpec::with_default_phases(3, Reference::Pure(vec![h, h]));
    let ensemble = build_symmetric_ensemble(&spec)?;
    let g = geometry(&ensemble)?;
    println!("confidences: {:?}", g.confidences());

    let report = solve_rank1_symmetric(&ensemble, &g)?;
    println!("Q = {:.3e}, R = {:.6}, P_corr = {:.6}", report.failure, report.rate, report.p_corr());
    println!("certified: {}", report.certified());
    println!("Z =\n{}", report.certificate.z.matrix());
    for (j, pi) in report.detection.operators().iter().enumerate().skip(1) {
        println!("Pi_{j} =\n{}", pi.matrix());
    }
    Ok(())
}
