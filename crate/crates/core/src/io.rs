//! JSON encodings of ensembles, detection sets and certificates.
//!
//! Complex numbers are `[re, im]` pairs and matrices are arrays of rows.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::ensemble::{build_symmetric_ensemble, Reference, StateEnsemble, Symmetry, SymmetrySpec};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, HermitianOperator, C64};
use crate::optimizer::DetectionSet;

pub type Pair = [f64; 2];
pub type MatrixJson = Vec<Vec<Pair>>;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateJson {
    pub prior: f64,
    pub matrix: MatrixJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReferenceJson {
    Coefficients(Vec<Pair>),
    Matrix(MatrixJson),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymmetryJson {
    #[serde(rename = "N")]
    pub order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnsembleJson {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<Vec<StateJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<SymmetryJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PovmJson {
    pub dim: usize,
    pub operators: Vec<MatrixJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateJson {
    pub dim: usize,
    pub matrix: MatrixJson,
}

pub fn matrix_to_json(m: &CMatrix) -> MatrixJson {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect()
}

pub fn matrix_from_json(rows: &MatrixJson, dim: usize) -> Result<CMatrix> {
    if rows.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: rows.len() });
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
        return Err(Error::NotSquare { rows: dim, cols: bad.len() });
    }
    Ok(CMatrix::from_fn(dim, dim, |r, c| C64::new(rows[r][c][0], rows[r][c][1])))
}

pub fn operator_from_json(rows: &MatrixJson, dim: usize) -> Result<HermitianOperator> {
    HermitianOperator::new(matrix_from_json(rows, dim)?)
}

fn pairs(v: &[Pair]) -> Vec<C64> {
    v.iter().map(|p| C64::new(p[0], p[1])).collect()
}

fn to_pairs(v: &[C64]) -> Vec<Pair> {
    v.iter().map(|c| [c.re, c.im]).collect()
}

fn symmetry_spec(s: &SymmetryJson, dim: usize) -> Result<Option<SymmetrySpec>> {
    let phases = match &s.phases {
        Some(p) => pairs(p),
        None => Symmetry::default_phases(s.order, dim),
    };
    if phases.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: phases.len() });
    }
    let reference = match &s.reference {
        None => return Ok(None),
        Some(ReferenceJson::Coefficients(c)) => {
            if c.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: c.len() });
            }
            Reference::Pure(pairs(c))
        }
        Some(ReferenceJson::Matrix(m)) => Reference::Mixed(operator_from_json(m, dim)?),
    };
    Ok(Some(SymmetrySpec { order: s.order, phases, reference }))
}

impl EnsembleJson {
    /// Builds the ensemble. Explicit states take precedence; a symmetry block
    /// is then checked against them. Without states the symmetry block must
    /// carry a reference state.
    pub fn to_ensemble(&self) -> Result<StateEnsemble> {
        let dim = self.dim;
        if dim == 0 {
            return Err(Error::Parse("dim must be positive".into()));
        }
        match (&self.states, &self.symmetry) {
            (Some(states), symmetry) => {
                let priors = states.iter().map(|s| s.prior).collect();
                let ops = states.iter().map(|s| operator_from_json(&s.matrix, dim)).collect::<Result<Vec<_>>>()?;
                let e = StateEnsemble::new(priors, ops)?;
                match symmetry {
                    None => Ok(e),
                    Some(s) => {
                        let phases = match &s.phases {
                            Some(p) => pairs(p),
                            None => Symmetry::default_phases(s.order, dim),
                        };
                        if phases.len() != dim {
                            return Err(Error::DimensionMismatch { expected: dim, found: phases.len() });
                        }
                        e.with_symmetry(Symmetry::new(s.order, phases)?)
                    }
                }
            }
            (None, Some(s)) => {
                let spec = symmetry_spec(s, dim)?
                    .ok_or_else(|| Error::Parse("symmetry block without states needs a reference".into()))?;
                build_symmetric_ensemble(&spec)
            }
            (None, None) => Err(Error::Parse("ensemble needs \"states\" or \"symmetry\"".into())),
        }
    }

    pub fn from_ensemble(e: &StateEnsemble) -> Self {
        let states = e
            .priors()
            .iter()
            .zip(e.states())
            .map(|(&prior, s)| StateJson { prior, matrix: matrix_to_json(s.matrix()) })
            .collect();
        let symmetry =
            e.symmetry().map(|s| SymmetryJson { order: s.order, phases: Some(to_pairs(&s.phases)), reference: None });
        Self { dim: e.dim(), states: Some(states), symmetry }
    }
}

impl PovmJson {
    pub fn to_detection_set(&self) -> Result<DetectionSet> {
        let ops = self.operators.iter().map(|m| operator_from_json(m, self.dim)).collect::<Result<Vec<_>>>()?;
        DetectionSet::new(ops)
    }

    pub fn from_detection_set(d: &DetectionSet) -> Self {
        Self { dim: d.dim(), operators: d.operators().iter().map(|p| matrix_to_json(p.matrix())).collect() }
    }
}

impl CertificateJson {
    pub fn to_operator(&self) -> Result<HermitianOperator> {
        operator_from_json(&self.matrix, self.dim)
    }

    pub fn from_operator(z: &HermitianOperator) -> Self {
        Self { dim: z.dim(), matrix: matrix_to_json(z.matrix()) }
    }
}

pub fn parse_ensemble(text: &str) -> Result<StateEnsemble> {
    serde_json::from_str::<EnsembleJson>(text)?.to_ensemble()
}

pub fn parse_value<T: for<'de> Deserialize<'de>>(v: &Value) -> Result<T> {
    Ok(serde_json::from_value(v.clone())?)
}
