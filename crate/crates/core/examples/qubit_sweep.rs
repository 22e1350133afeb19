//! Mixed symmetric qubit states: sweep the angle and compare the numeric
//! solver against the closed form.
//!
//! ```bash
//! MAXCONF_SEED=7 cargo run --release --example qubit_sweep
//! ```

use maxconf::analytic::{qubit_mixed_solution, SymmetricFamilyParams};
use maxconf::geometry::geometry;
use maxconf::optimizer::{solve_numeric, SolverOptions};

fn main() -> maxconf::error::Result<()> {
    let options = SolverOptions::from_env();
    let (n, p) = (3, 0.8);
    println!("{:>8} {:>10} {:>10} {:>10} {:>10}", "gamma", "C", "Q", "Q_num", "iters");
    for k in 1..=8 {
        let gamma = k as f64 * std::f64::consts::FRAC_PI_2 / 8.0;
        let params = SymmetricFamilyParams::qubit(n, p, gamma)?;
        let closed = qubit_mixed_solution(&params)?;
        let e = params.ensemble()?;
        let g = geometry(&e)?;
        let numeric = solve_numeric(&e, &g, &options)?;
        println!(
            "{gamma:>8.4} {:>10.6} {:>10.6} {:>10.6} {:>10}",
            closed.confidence, closed.failure, numeric.failure, numeric.metadata.iterations
        );
    }
    Ok(())
}
