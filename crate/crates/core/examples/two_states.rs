//! Two mixed qubit states reduce to a pair of operators with orthogonal
//! supports that add up to `rho`.

use maxconf::ensemble::StateEnsemble;
use maxconf::geometry::{geometry, n2_sigma_mapping};
use maxconf::linalg::{CMatrix, HermitianOperator, C64};

fn bloch(p: f64, n: [f64; 3]) -> HermitianOperator {
    let m = CMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(1.0 + p * n[2], 0.0),
            C64::new(p * n[0], -p * n[1]),
            C64::new(p * n[0], p * n[1]),
            C64::new(1.0 - p * n[2], 0.0),
        ],
    );
    HermitianOperator::new(m / C64::new(2.0, 0.0)).unwrap()
}

fn main() -> maxconf::error::Result<()> {
    let s = 0.5_f64.sqrt();
    let e = StateEnsemble::new(vec![0.6, 0.4], vec![bloch(0.8, [0.0, 0.0, 1.0]), bloch(0.6, [s, 0.0, s])])?;
    let g = geometry(&e)?;
    let m = n2_sigma_mapping(&e, &g)?;
    println!("C = {:?}", g.confidences());
    println!("weights = {:?}", m.weights);
    println!("sigma_1 =\n{}sigma_2 =\n{}", m.states[0].matrix(), m.states[1].matrix());
    println!("|P1 P2| = {:.1e}, |w1 s1 + w2 s2 - rho| = {:.1e}", m.projector_residual, m.sum_residual);
    Ok(())
}
