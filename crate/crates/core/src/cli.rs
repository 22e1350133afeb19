//! Command-line front end.
//!
//! Exit codes: 0 pass, 1 semantic failure, 2 input error, 3 uncertified solve.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::analytic::{
    flat_mixed_solution, pure_symmetric_solution, qubit_closed_form, square_root_measurement, SymmetricFamilyParams,
};
use crate::ensemble::StateEnsemble;
use crate::error::{Error, Result};
use crate::geometry::{geometry, McGeometry};
use crate::io::{parse_value, CertificateJson, EnsembleJson, Pair, PovmJson};
use crate::linalg::{HermitianOperator, C64};
use crate::optimizer::{
    solve_numeric, solve_rank1_symmetric, verify_certificate, witness_fit, OptimalityCertificate, SolveReport,
    SolverOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNCERTIFIED: i32 = 3;

const DEFAULT_AGREEMENT: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Validate,
    Solve,
    Verify,
    Sweep,
    Compare,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Analytic,
    Numeric,
    #[default]
    Auto,
}

/// `param:start:stop:steps`, sampled at `steps` evenly spaced points.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub param: String,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| if i + 1 == self.steps { self.stop } else { self.start + h * i as f64 }).collect()
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [param, start, stop, steps] = parts.as_slice() else {
            return Err(format!("grid '{s}' is not param:start:stop:steps"));
        };
        let num = |x: &str| parse_number(x).ok_or_else(|| format!("grid '{s}': cannot read '{x}'"));
        let steps: usize = steps.parse().map_err(|_| format!("grid '{s}': steps must be a positive integer"))?;
        if steps == 0 {
            return Err(format!("grid '{s}': steps must be at least 1"));
        }
        if param.is_empty() {
            return Err(format!("grid '{s}': empty parameter name"));
        }
        Ok(Self { param: param.to_string(), start: num(start)?, stop: num(stop)?, steps })
    }
}

/// Plain numbers plus `pi`, `pi/k` and `k*pi`.
fn parse_number(x: &str) -> Option<f64> {
    let x = x.trim();
    if let Ok(v) = x.parse::<f64>() {
        return Some(v);
    }
    let pi = std::f64::consts::PI;
    if x == "pi" {
        return Some(pi);
    }
    if let Some(d) = x.strip_prefix("pi/") {
        return d.parse::<f64>().ok().map(|d| pi / d);
    }
    if let Some(k) = x.strip_suffix("*pi") {
        return k.parse::<f64>().ok().map(|k| k * pi);
    }
    None
}

fn positive(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("'{s}' is not a positive number")),
    }
}

#[derive(Clone, Debug, Parser)]
#[command(name = "maxconf", version, about = "Maximum-confidence quantum state discrimination")]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// Ensemble JSON (validate, solve, compare), solve output or ensemble (verify), sweep config (sweep).
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    pub mode: Mode,
    /// Agreement tolerance for compare and sweep --check; gap target of the numeric solver.
    #[arg(long, value_parser = positive)]
    pub tol: Option<f64>,
    /// Add a numeric cross-check column to sweeps.
    #[arg(long)]
    pub check: bool,
    /// Run the perturbation witness when verification fails.
    #[arg(long)]
    pub witness: bool,
    #[arg(long, value_parser = GridSpec::from_str)]
    pub grid: Vec<GridSpec>,
    /// Detection-set JSON overriding the one inside the verify input.
    #[arg(long)]
    pub povm: Option<PathBuf>,
    /// Certificate JSON overriding the one inside the verify input.
    #[arg(long)]
    pub certificate: Option<PathBuf>,
    /// Largest epsilon of the witness fit; the second point is a tenth of it.
    #[arg(long, default_value_t = 1e-3, value_parser = positive)]
    pub epsilon: f64,
}

/// Result of one invocation: exit code, main output, diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
    pub message: Option<String>,
}

impl Outcome {
    fn new(code: i32, output: String) -> Self {
        Self { code, output, message: None }
    }

    fn input_error(err: impl std::fmt::Display) -> Self {
        Self { code: EXIT_INPUT, output: String::new(), message: Some(format!("error: {err}")) }
    }
}

/// Runs the command and writes the main output to `--output` (or returns it
/// for the caller to print).
pub fn run(config: &RunConfig) -> Outcome {
    let mut outcome = match config.command {
        Command::Validate => cmd_validate(config),
        Command::Solve => cmd_solve(config),
        Command::Verify => cmd_verify(config),
        Command::Sweep => cmd_sweep(config),
        Command::Compare => cmd_compare(config),
    };
    if let Some(path) = &config.output {
        if !outcome.output.is_empty() {
            if let Err(e) = std::fs::write(path, &outcome.output) {
                return Outcome::input_error(format!("cannot write {}: {e}", path.display()));
            }
            outcome.output.clear();
        }
    }
    outcome
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialise");
    s.push('\n');
    s
}

fn input_code(err: &Error) -> i32 {
    match err {
        Error::InvalidEnsemble(_) => EXIT_FAILED,
        _ => EXIT_INPUT,
    }
}

fn load_ensemble(v: &Value) -> Result<StateEnsemble> {
    parse_value::<EnsembleJson>(v)?.to_ensemble()
}

pub fn cmd_validate(config: &RunConfig) -> Outcome {
    let value = match read_json(&config.input) {
        Ok(v) => v,
        Err(e) => return Outcome::input_error(e),
    };
    let ensemble = match load_ensemble(&value) {
        Ok(e) => e,
        Err(Error::InvalidEnsemble(report)) => {
            let out = json!({
                "valid": false,
                "violations": report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            });
            return Outcome::new(EXIT_FAILED, to_json_string(&out));
        }
        Err(e) => return Outcome::input_error(e),
    };
    let report = ensemble.validate();
    let out = json!({
        "valid": report.is_valid(),
        "violations": report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "reduced_support": report.reduced_support,
        "dim": ensemble.dim(),
        "states": ensemble.len(),
        "symmetric": ensemble.symmetry().is_some(),
    });
    Outcome::new(if report.is_valid() { EXIT_OK } else { EXIT_FAILED }, to_json_string(&out))
}

fn certificate_json(c: &OptimalityCertificate) -> Value {
    json!({
        "accepted": c.accepted,
        "min_eigenvalue_z": c.min_eigenvalue_z,
        "support_min_eigenvalues": c.support_min_eigenvalues,
        "scaled_support_min_eigenvalues": c.scaled_support_min_eigenvalues,
        "failure_slackness": c.failure_slackness,
        "slackness": c.slackness,
        "scaled_slackness": c.scaled_slackness,
        "form_disagreement": c.form_disagreement,
        "trace_z": c.trace_z,
        "rate": c.rate,
        "trace_gap": c.trace_gap,
        "failure_rank": c.failure_rank,
        "failure_rank_bound": c.failure_rank_bound,
        "completeness": c.detection.completeness,
        "detection_min_eigenvalue": c.detection.min_eigenvalue,
        "support_violation": c.detection.support,
        "failures": c.failures(),
    })
}

fn report_json(e: &StateEnsemble, r: &SolveReport) -> Value {
    json!({
        "mode": r.metadata.mode.as_str(),
        "certified": r.certified(),
        "C": r.max_confidences,
        "achieved_confidence": r.statistics.confidences,
        "R": r.rate,
        "Q": r.failure,
        "P_corr": r.p_corr(),
        "residuals": certificate_json(&r.certificate),
        "metadata": {
            "iterations": r.metadata.iterations,
            "restarts": r.metadata.restarts,
            "scale": r.metadata.scale,
            "reduced_rate": r.metadata.reduced_rate,
            "polished": r.metadata.polished,
        },
        "ensemble": EnsembleJson::from_ensemble(e),
        "povm": PovmJson::from_detection_set(&r.detection),
        "certificate": CertificateJson::from_operator(&r.certificate.z),
    })
}

fn solver_options(config: &RunConfig) -> SolverOptions {
    let mut opts = SolverOptions::from_env();
    if let Some(t) = config.tol {
        opts.opt_tol = t;
    }
    opts
}

/// Closed form when a symmetry with nondegenerate top eigenvalue is present, numeric otherwise.
pub fn solve_with_mode(e: &StateEnsemble, g: &McGeometry, mode: Mode, options: &SolverOptions) -> Result<SolveReport> {
    let analytic_ok = e.symmetry().is_some() && g.states[0].degeneracy == 1;
    match mode {
        Mode::Analytic => solve_rank1_symmetric(e, g),
        Mode::Numeric => solve_numeric(e, g, options),
        Mode::Auto if analytic_ok => solve_rank1_symmetric(e, g),
        Mode::Auto => solve_numeric(e, g, options),
    }
}

pub fn cmd_solve(config: &RunConfig) -> Outcome {
    let e = match read_json(&config.input).and_then(|v| load_ensemble(&v)) {
        Ok(e) => e,
        Err(err) => return Outcome { code: input_code(&err), ..Outcome::input_error(err) },
    };
    let g = match geometry(&e) {
        Ok(g) => g,
        Err(err) => return Outcome::input_error(err),
    };
    match solve_with_mode(&e, &g, config.mode, &solver_options(config)) {
        Ok(r) => {
            let code = if r.certified() { EXIT_OK } else { EXIT_UNCERTIFIED };
            let mut out = Outcome::new(code, to_json_string(&report_json(&e, &r)));
            if code != EXIT_OK {
                out.message = Some(format!("solution not certified: {}", r.certificate.failures().join("; ")));
            }
            out
        }
        Err(err @ Error::NotConverged { .. }) => {
            Outcome { code: EXIT_UNCERTIFIED, output: String::new(), message: Some(format!("error: {err}")) }
        }
        Err(err) => Outcome::input_error(err),
    }
}

pub fn cmd_verify(config: &RunConfig) -> Outcome {
    match verify_inner(config) {
        Ok(o) => o,
        Err(err) => Outcome::input_error(err),
    }
}

fn verify_inner(config: &RunConfig) -> Result<Outcome> {
    let value = read_json(&config.input)?;
    let bundle = value.get("ensemble").is_some();
    let e = load_ensemble(if bundle { &value["ensemble"] } else { &value })?;
    let povm: PovmJson = match &config.povm {
        Some(p) => parse_value(&read_json(p)?)?,
        None if bundle && value.get("povm").is_some() => parse_value(&value["povm"])?,
        None => return Err(Error::Parse("verify needs a detection set (--povm or a solve output)".into())),
    };
    let cert: CertificateJson = match &config.certificate {
        Some(p) => parse_value(&read_json(p)?)?,
        None if bundle && value.get("certificate").is_some() => parse_value(&value["certificate"])?,
        None => return Err(Error::Parse("verify needs a certificate (--certificate or a solve output)".into())),
    };
    if povm.dim != e.dim() {
        return Err(Error::DimensionMismatch { expected: e.dim(), found: povm.dim });
    }
    if cert.dim != e.dim() {
        return Err(Error::DimensionMismatch { expected: e.dim(), found: cert.dim });
    }
    let d = povm.to_detection_set()?;
    if d.outcomes() != e.len() {
        return Err(Error::WrongStateCount { expected: e.len(), found: d.outcomes() });
    }
    let z = cert.to_operator()?;
    let g = geometry(&e)?;
    let c = verify_certificate(&e, &g, &d, &z);
    let mut out = json!({ "accepted": c.accepted, "residuals": certificate_json(&c) });
    if config.witness && !c.accepted {
        out["witness"] = match witness_fit(&e, &g, &d, &z, [config.epsilon, config.epsilon / 10.0]) {
            Ok(fit) => {
                let w = &fit.reports[0];
                json!({
                    "case": match w.case {
                        crate::optimizer::WitnessCase::Certificate => "certificate".to_string(),
                        crate::optimizer::WitnessCase::Support(j) => format!("support {}", j + 1),
                    },
                    "mu": w.mu,
                    "epsilon": [fit.reports[0].epsilon, fit.reports[1].epsilon],
                    "gap": [fit.reports[0].gap, fit.reports[1].gap],
                    "predicted": [fit.reports[0].predicted, fit.reports[1].predicted],
                    "baseline": w.baseline,
                    "primed_trace_gap": [fit.reports[0].primed_trace_gap, fit.reports[1].primed_trace_gap],
                    "primed_valid": w.primed_valid,
                    "support_preserved": w.support_preserved,
                    "preconditions_hold": w.preconditions_hold(),
                    "equality_residual": w.equality_residual,
                    "ratio": fit.ratios,
                    "k": fit.k,
                    "leading_order_confirmed": fit.within,
                })
            }
            Err(err) => json!({ "error": err.to_string() }),
        };
    }
    let code = if c.accepted { EXIT_OK } else { EXIT_FAILED };
    Ok(Outcome::new(code, to_json_string(&out)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    Pure,
    QubitMixed,
    FlatMixed,
}

#[derive(Clone, Debug, Deserialize)]
struct SweepConfig {
    family: String,
    #[serde(rename = "N")]
    order: Option<f64>,
    d: Option<f64>,
    p: Option<f64>,
    gamma: Option<f64>,
    coefficients: Option<Vec<Pair>>,
}

#[derive(Clone, Debug)]
struct SweepRow {
    values: Vec<f64>,
    confidence: f64,
    failure: f64,
    confidence_me: Option<f64>,
    certified: bool,
    /// Whether an ensemble exists at this point (not at degenerate endpoints).
    solvable: bool,
    numeric: Option<f64>,
}

/// `%g`-style formatting with `digits` significant digits.
pub fn format_g(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    let trim = |s: String| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if exp < -5 || exp >= digits as i32 {
        let s = format!("{:.*e}", digits - 1, x);
        let (mantissa, e) = s.split_once('e').expect("exponent present");
        format!("{}e{}", trim(mantissa.to_string()), e)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim(format!("{:.*}", decimals, x))
    }
}

fn family_params(family: Family, cfg: &SweepConfig, vals: &[(String, f64)]) -> Result<(Vec<f64>, RowInput)> {
    let get = |name: &str, default: Option<f64>| -> Result<f64> {
        vals.iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
            .or(default)
            .ok_or_else(|| Error::Parse(format!("sweep needs a value for '{name}'")))
    };
    let int = |name: &str, x: f64| -> Result<usize> {
        let r = x.round();
        if (x - r).abs() > 1e-9 || r < 1.0 {
            return Err(Error::Parse(format!("'{name}' must be a positive integer, got {x}")));
        }
        Ok(r as usize)
    };
    match family {
        Family::Pure => {
            let n = int("N", get("N", cfg.order)?)?;
            if let Some(c) = &cfg.coefficients {
                if vals.iter().any(|(name, _)| name == "d") {
                    return Err(Error::Parse("cannot sweep 'd' with explicit coefficients".into()));
                }
                let coeffs: Vec<C64> = c.iter().map(|p| C64::new(p[0], p[1])).collect();
                Ok((vec![n as f64, coeffs.len() as f64], RowInput::Pure(n, coeffs)))
            } else {
                let d = int("d", get("d", cfg.d)?)?;
                let c = C64::new(1.0 / (d as f64).sqrt(), 0.0);
                Ok((vec![n as f64, d as f64], RowInput::Pure(n, vec![c; d])))
            }
        }
        Family::QubitMixed => {
            let n = int("N", get("N", cfg.order)?)?;
            let p = get("p", cfg.p)?;
            let gamma = get("gamma", cfg.gamma)?;
            Ok((vec![n as f64, p, gamma], RowInput::Qubit(n, p, gamma)))
        }
        Family::FlatMixed => {
            let n = int("N", get("N", cfg.order)?)?;
            let d = int("d", get("d", cfg.d)?)?;
            let p = get("p", cfg.p)?;
            Ok((vec![n as f64, d as f64, p], RowInput::Flat(n, d, p)))
        }
    }
}

#[derive(Clone, Debug)]
enum RowInput {
    Pure(usize, Vec<C64>),
    Qubit(usize, f64, f64),
    Flat(usize, usize, f64),
}

fn sweep_row(values: Vec<f64>, input: &RowInput, check: bool) -> Result<SweepRow> {
    let (confidence, failure, confidence_me, params) = match input {
        RowInput::Pure(n, c) => {
            let params = SymmetricFamilyParams::pure(*n, c.clone())?;
            let s = pure_symmetric_solution(&params)?;
            let me = square_root_measurement(&params)?;
            (s.confidence, s.failure, Some(me.confidence), Some(params))
        }
        RowInput::Qubit(n, p, gamma) => {
            let s = qubit_closed_form(*n, *p, *gamma)?;
            (s.confidence, s.failure, None, SymmetricFamilyParams::qubit(*n, *p, *gamma).ok())
        }
        RowInput::Flat(n, d, p) => {
            let params = SymmetricFamilyParams::flat(*n, *d, *p)?;
            let s = flat_mixed_solution(&params)?;
            (s.confidence, s.failure, None, Some(params))
        }
    };
    let mut certified = false;
    let mut numeric = None;
    let mut solvable = false;
    if let Some(params) = params {
        if let Ok(e) = params.ensemble() {
            solvable = true;
            if let Ok(g) = geometry(&e) {
                if let Ok(r) = solve_rank1_symmetric(&e, &g) {
                    certified = r.certified();
                }
                if check {
                    numeric = solve_numeric(&e, &g, &SolverOptions::from_env()).ok().map(|r| r.failure);
                }
            }
        }
    }
    Ok(SweepRow { values, confidence, failure, confidence_me, certified, solvable, numeric })
}

pub fn cmd_sweep(config: &RunConfig) -> Outcome {
    match sweep_inner(config) {
        Ok(o) => o,
        Err(err) => Outcome::input_error(err),
    }
}

fn sweep_inner(config: &RunConfig) -> Result<Outcome> {
    let cfg: SweepConfig = parse_value(&read_json(&config.input)?)?;
    let family = match cfg.family.as_str() {
        "pure" => Family::Pure,
        "qubit-mixed" => Family::QubitMixed,
        "flat-mixed" => Family::FlatMixed,
        other => return Err(Error::Parse(format!("unknown family '{other}'"))),
    };
    let allowed: &[&str] = match family {
        Family::Pure => &["N", "d"],
        Family::QubitMixed => &["N", "p", "gamma"],
        Family::FlatMixed => &["N", "d", "p"],
    };
    for g in &config.grid {
        if !allowed.contains(&g.param.as_str()) {
            return Err(Error::Parse(format!("family '{}' has no parameter '{}'", cfg.family, g.param)));
        }
    }
    let mut points: Vec<Vec<(String, f64)>> = vec![Vec::new()];
    for g in &config.grid {
        points = points
            .into_iter()
            .flat_map(|prefix| {
                g.values().into_iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push((g.param.clone(), v));
                    p
                })
            })
            .collect();
    }
    let inputs = points.iter().map(|p| family_params(family, &cfg, p)).collect::<Result<Vec<_>>>()?;
    let rows = inputs
        .into_par_iter()
        .map(|(values, input)| sweep_row(values, &input, config.check))
        .collect::<Result<Vec<_>>>()?;

    let tol = config.tol.unwrap_or(DEFAULT_AGREEMENT);
    let mut header: Vec<&str> = match family {
        Family::Pure => vec!["N", "d", "C", "Q_min", "C_ME", "certified"],
        Family::QubitMixed => vec!["N", "p", "gamma", "C", "Q_min", "certified"],
        Family::FlatMixed => vec!["N", "d", "p", "C", "Q_min", "certified"],
    };
    if config.check {
        header.extend(["Q_numeric", "check_ok"]);
    }
    let mut csv = header.join(",");
    csv.push('\n');
    let mut all_ok = true;
    for r in &rows {
        let mut cells: Vec<String> = r.values.iter().map(|v| format_g(*v, 9)).collect();
        cells.push(format_g(r.confidence, 9));
        cells.push(format_g(r.failure, 9));
        if family == Family::Pure {
            cells.push(r.confidence_me.map(|c| format_g(c, 9)).unwrap_or_default());
        }
        cells.push(r.certified.to_string());
        if config.check {
            if r.solvable {
                let ok = r.numeric.is_some_and(|q| (q - r.failure).abs() <= tol);
                all_ok &= ok;
                cells.push(r.numeric.map(|q| format_g(q, 9)).unwrap_or_default());
                cells.push(ok.to_string());
            } else {
                cells.extend(["".to_string(), "n/a".to_string()]);
            }
        }
        let _ = writeln!(csv, "{}", cells.join(","));
    }
    Ok(Outcome::new(if all_ok { EXIT_OK } else { EXIT_FAILED }, csv))
}

pub fn cmd_compare(config: &RunConfig) -> Outcome {
    match compare_inner(config) {
        Ok(o) => o,
        Err(err) => Outcome::input_error(err),
    }
}

fn compare_inner(config: &RunConfig) -> Result<Outcome> {
    let e = load_ensemble(&read_json(&config.input)?)?;
    if e.symmetry().is_none() {
        return Err(Error::NotSymmetric("compare needs an ensemble with a symmetry block".into()));
    }
    let g = geometry(&e)?;
    let analytic = solve_rank1_symmetric(&e, &g)?;
    let numeric = match solve_numeric(&e, &g, &solver_options(config)) {
        Ok(r) => r,
        Err(err) => {
            return Ok(Outcome {
                code: EXIT_FAILED,
                output: String::new(),
                message: Some(format!("numeric solver failed: {err}")),
            })
        }
    };
    let failure_difference = (analytic.failure - numeric.failure).abs();
    let detection_distance = analytic
        .detection
        .operators()
        .iter()
        .zip(numeric.detection.operators())
        .map(|(a, b): (&HermitianOperator, &HermitianOperator)| a.distance(b))
        .fold(0.0, f64::max);
    let tol = config.tol.unwrap_or(DEFAULT_AGREEMENT);
    let agree = failure_difference <= tol && detection_distance <= tol;
    let out = json!({
        "agree": agree,
        "tolerance": tol,
        "Q_analytic": analytic.failure,
        "Q_numeric": numeric.failure,
        "failure_difference": failure_difference,
        "detection_distance": detection_distance,
        "analytic_certificate": certificate_json(&analytic.certificate),
        "numeric_certificate": certificate_json(&numeric.certificate),
    });
    Ok(Outcome::new(if agree { EXIT_OK } else { EXIT_FAILED }, to_json_string(&out)))
}
