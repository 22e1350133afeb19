//! An ensemble with no symmetry: three unequally weighted qutrit states.
//! Only the numeric solver applies; its answer is trusted because the
//! returned certificate passes verification.

use maxconf::ensemble::StateEnsemble;
use maxconf::geometry::geometry;
use maxconf::linalg::{CMatrix, HermitianOperator, C64};
use maxconf::optimizer::{solve_numeric, SolverOptions};

fn state(rows: [[f64; 3]; 3]) -> HermitianOperator {
    let m = CMatrix::from_fn(3, 3, |i, j| C64::new(rows[i][j], 0.0));
    let t = m.trace().re;
    HermitianOperator::new(m / C64::new(t, 0.0)).unwrap()
}

fn main() -> maxconf::error::Result<()> {
    let states = vec![
        state([[2.0, 0.5, 0.0], [0.5, 1.0, 0.2], [0.0, 0.2, 0.3]]),
        state([[0.4, 0.1, 0.3], [0.1, 2.0, -0.4], [0.3, -0.4, 1.0]]),
        state([[1.0, -0.3, 0.2], [-0.3, 0.5, 0.0], [0.2, 0.0, 2.0]]),
    ];
    let e = StateEnsemble::new(vec![0.5, 0.3, 0.2], states)?;
    let g = geometry(&e)?;
    println!("maximum confidences: {:?}", g.confidences());

    let report = solve_numeric(&e, &g, &SolverOptions::from_env())?;
    println!("Q = {:.9}  R = {:.9}  Tr Z = {:.9}", report.failure, report.rate, report.certificate.trace_z);
    println!("achieved confidences: {:?}", report.statistics.confidences);
    println!(
        "certified={} iterations={} restarts={} polished={}",
        report.certified(),
        report.metadata.iterations,
        report.metadata.restarts,
        report.metadata.polished
    );
    if !report.certified() {
        println!("failures: {:?}", report.certificate.failures());
    }
    Ok(())
}
