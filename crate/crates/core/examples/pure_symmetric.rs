//! Symmetric pure states: `C = d/N` regardless of the coefficients, while the
//! failure probability is set by the smallest coefficient. With `N = d` the
//! measurement becomes unambiguous.

use maxconf::analytic::{pure_symmetric_solution, SymmetricFamilyParams};
use maxconf::geometry::{geometry, is_unambiguous};
use maxconf::linalg::C64;
use maxconf::optimizer::solve_rank1_symmetric;

fn coefficients(weights: &[f64]) -> Vec<C64> {
    weights.iter().enumerate().map(|(l, w)| C64::from_polar(w.sqrt(), 0.3 * l as f64)).collect()
}

fn main() -> maxconf::error::Result<()> {
    for (n, weights) in [(4, vec![0.5, 0.3, 0.2]), (5, vec![0.25, 0.25, 0.25, 0.25]), (3, vec![0.6, 0.3, 0.1])] {
        let params = SymmetricFamilyParams::pure(n, coefficients(&weights))?;
        let closed = pure_symmetric_solution(&params)?;
        let e = params.ensemble()?;
        let g = geometry(&e)?;
        let solved = solve_rank1_symmetric(&e, &g)?;
        println!(
            "N={n} d={}  C={:.6} (closed {:.6})  Q={:.6} (closed {:.6})  certified={}",
            weights.len(),
            g.confidences()[0],
            closed.confidence,
            solved.failure,
            closed.failure,
            solved.certified()
        );
        if n == weights.len() {
            let u = is_unambiguous(&g, &e);
            println!("  unambiguous: {} (cross support {:.1e})", u.unambiguous, u.cross_support);
        }
    }
    Ok(())
}
