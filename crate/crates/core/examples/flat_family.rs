//! Flat coefficients `|c_l| = 1/sqrt(d)`: the optimum never fails and its
//! detection operators are those of the square-root measurement.

use maxconf::analytic::{flat_mixed_solution, square_root_measurement, SymmetricFamilyParams};
use maxconf::geometry::geometry;
use maxconf::optimizer::solve_rank1_symmetric;

fn main() -> maxconf::error::Result<()> {
    for (n, d, p) in [(4, 2, 0.5), (6, 3, 0.25), (5, 4, 1.0)] {
        let params = SymmetricFamilyParams::flat(n, d, p)?;
        let closed = flat_mixed_solution(&params)?;
        let e = params.ensemble()?;
        let g = geometry(&e)?;
        let report = solve_rank1_symmetric(&e, &g)?;
        let srm = square_root_measurement(&SymmetricFamilyParams::flat(n, d, 1.0)?)?;
        let distance = (0..n).map(|j| report.detection.conclusive(j).distance(&srm.detection[j])).fold(0.0, f64::max);
        println!(
            "N={n} d={d} p={p}: C={:.6} (closed {:.6}) Q={:.1e} |Pi - Pi_SRM|={distance:.1e}",
            g.confidences()[0],
            closed.confidence,
            report.failure
        );
    }
    Ok(())
}
