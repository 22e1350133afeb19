//! How much confidence the square-root measurement gives up compared with
//! the maximum-confidence measurement for symmetric pure states.

use maxconf::analytic::{pure_symmetric_solution, square_root_measurement, SymmetricFamilyParams};
use maxconf::linalg::C64;

fn main() -> maxconf::error::Result<()> {
    let n = 5;
    println!("{:>6} {:>10} {:>10} {:>10}", "|c_1|^2", "C", "C_ME", "Q");
    for k in 0..=8 {
        let w = 0.5 - 0.05 * k as f64;
        let c = vec![C64::new(w.sqrt(), 0.0), C64::new((1.0 - w).sqrt(), 0.0)];
        let params = SymmetricFamilyParams::pure(n, c)?;
        let mc = pure_symmetric_solution(&params)?;
        let me = square_root_measurement(&params)?;
        println!("{w:>6.2} {:>10.6} {:>10.6} {:>10.6}", mc.confidence, me.confidence, mc.failure);
    }
    Ok(())
}
