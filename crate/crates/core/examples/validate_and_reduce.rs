//! Ensemble validation and reduction to the joint support. Two qutrit
//! states that live in a plane are solved in two dimensions and embedded back.

use maxconf::ensemble::StateEnsemble;
use maxconf::geometry::{geometry, reduce_to_support};
use maxconf::linalg::{CMatrix, HermitianOperator, C64};

fn main() -> maxconf::error::Result<()> {
    let bad = StateEnsemble::new(vec![0.7, 0.4], vec![HermitianOperator::identity(2).scaled(0.5); 2])?;
    println!("{}", bad.validate());

    let r = |x: f64| C64::new(x, 0.0);
    let a = CMatrix::from_row_slice(3, 3, &[r(0.7), r(0.2), r(0.0), r(0.2), r(0.3), r(0.0), r(0.0), r(0.0), r(0.0)]);
    let b = CMatrix::from_row_slice(3, 3, &[r(0.4), r(-0.1), r(0.0), r(-0.1), r(0.6), r(0.0), r(0.0), r(0.0), r(0.0)]);
    let e = StateEnsemble::new(vec![0.5, 0.5], vec![HermitianOperator::new(a)?, HermitianOperator::new(b)?])?;
    let report = e.validate();
    println!("valid={} reduced support={:?}", report.is_valid(), report.reduced_support);

    let g = geometry(&e)?;
    let reduced = reduce_to_support(&e, &g)?;
    println!(
        "reduced to dim {} (scale {:.3}), confidences {:?}",
        reduced.ensemble.dim(),
        reduced.scale,
        g.confidences()
    );
    Ok(())
}
