//! Reading an ensemble description, solving it, and writing the result in
//! the same JSON shapes the command-line tool uses.
//!
//! ```bash
//! cargo run --example json_pipeline -- crates/core/tests/data/qubit_mixed.json
//! ```

use maxconf::cli::{solve_with_mode, Mode};
use maxconf::geometry::geometry;
use maxconf::io::{parse_ensemble, CertificateJson, PovmJson};
use maxconf::optimizer::SolverOptions;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/qubit_mixed.json").into());
    let e = parse_ensemble(&std::fs::read_to_string(path)?)?;
    let g = geometry(&e)?;
    let report = solve_with_mode(&e, &g, Mode::Auto, &SolverOptions::from_env())?;
    println!("mode={} Q={} certified={}", report.metadata.mode.as_str(), report.failure, report.certified());
    println!("{}", serde_json::to_string_pretty(&PovmJson::from_detection_set(&report.detection))?);
    println!("{}", serde_json::to_string(&CertificateJson::from_operator(&report.certificate.z))?);
    Ok(())
}
