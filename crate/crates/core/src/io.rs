//! Model files and reports.
//!
//! The model file is the JSON exchange format: structure constants are a
//! sparse list, omitted entries are zero, and antisymmetric partners may be
//! left out. Reports bundle the per-t connection data and the Dirac scalars.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::connection::{
    self, holonomy_algebra, lambda_t, self_adjointness_check, torsion,
};
use crate::dirac::{eigenvalue_bound, kp_report, EigenvalueBound, KPReport};
use crate::error::{GeomError, Result};
use crate::lie::{LieAlgebraData, ReductiveModel};
use crate::linalg::RMatrix;
use crate::string_eq::{vanishing_theorem_flags, VanishingFlag};

/// Hard cap on the algebra dimension accepted from files.
pub const MAX_FILE_DIM: usize = 64;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructureConstantEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: f64,
}

/// JSON schema of a model file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    #[serde(default)]
    pub name: String,
    pub dim: usize,
    pub h_indices: Vec<usize>,
    pub m_indices: Vec<usize>,
    pub structure_constants: Vec<StructureConstantEntry>,
    pub metric_m: Vec<Vec<f64>>,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<f64>>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, thiserror::Error)]
pub enum ModelFileError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("schema: {0}")]
    Schema(String),
}

fn matrix_from_nested(rows: &[Vec<f64>], dim: usize, what: &str) -> std::result::Result<RMatrix, ModelFileError> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(ModelFileError::Schema(format!(
            "{what} must be a {dim}x{dim} matrix"
        )));
    }
    let mut m = RMatrix::zeros(dim, dim);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(ModelFileError::Schema(format!(
                    "{what} entry ({i},{j}) is not finite"
                )));
            }
            m.set(i, j, v);
        }
    }
    Ok(m)
}

impl ModelFile {
    /// Build the model, filling in antisymmetric partners and rejecting
    /// inconsistent duplicates.
    pub fn into_model(self) -> std::result::Result<ReductiveModel, ModelFileError> {
        if self.dim == 0 || self.dim > MAX_FILE_DIM {
            return Err(ModelFileError::Schema(format!(
                "dim must be in 1..={MAX_FILE_DIM}, got {}",
                self.dim
            )));
        }
        let dim = self.dim;
        let mut seen = vec![false; dim];
        for &i in self.h_indices.iter().chain(self.m_indices.iter()) {
            if i >= dim {
                return Err(ModelFileError::Schema(format!(
                    "basis index {i} out of range 0..{dim}"
                )));
            }
            if seen[i] {
                return Err(ModelFileError::Schema(format!("basis index {i} repeated")));
            }
            seen[i] = true;
        }
        if !seen.iter().all(|&s| s) {
            return Err(ModelFileError::Schema(
                "h_indices and m_indices must partition 0..dim".to_string(),
            ));
        }
        let n = self.m_indices.len();
        let mut given: BTreeMap<(usize, usize, usize), f64> = BTreeMap::new();
        for e in &self.structure_constants {
            if e.i >= dim || e.j >= dim || e.k >= dim {
                return Err(ModelFileError::Schema(format!(
                    "structure constant index ({},{},{}) out of range",
                    e.i, e.j, e.k
                )));
            }
            if !e.c.is_finite() {
                return Err(ModelFileError::Schema(
                    "non-finite structure constant".to_string(),
                ));
            }
            if let Some(prev) = given.insert((e.i, e.j, e.k), e.c) {
                if (prev - e.c).abs() > 1e-12 {
                    return Err(ModelFileError::Schema(format!(
                        "conflicting duplicate entry ({},{},{})",
                        e.i, e.j, e.k
                    )));
                }
            }
        }
        let mut algebra = LieAlgebraData::new(dim);
        for (&(i, j, k), &c) in &given {
            if let Some(&partner) = given.get(&(j, i, k)) {
                if (partner + c).abs() > 1e-12 {
                    return Err(ModelFileError::Schema(format!(
                        "entries ({i},{j},{k}) and ({j},{i},{k}) are not antisymmetric partners"
                    )));
                }
            }
            algebra.set_raw(i, j, k, c);
            if given.get(&(j, i, k)).is_none() {
                algebra.set_raw(j, i, k, -c);
            }
        }
        let metric_m = matrix_from_nested(&self.metric_m, n, "metric_m")?;
        let q = matrix_from_nested(&self.q, dim, "Q")?;
        for v in self.params.values() {
            if !v.is_finite() {
                return Err(ModelFileError::Schema("non-finite parameter".to_string()));
            }
        }
        Ok(ReductiveModel {
            algebra,
            h_idx: self.h_indices,
            m_idx: self.m_indices,
            metric_m,
            q,
            name: self.name,
            params: self.params,
        })
    }

    pub fn from_model(model: &ReductiveModel) -> Self {
        let dim = model.dim();
        let mut structure_constants = Vec::new();
        for i in 0..dim {
            for j in i + 1..dim {
                for k in 0..dim {
                    let c = model.algebra.c(i, j, k);
                    if c != 0.0 {
                        structure_constants.push(StructureConstantEntry { i, j, k, c });
                    }
                }
            }
        }
        ModelFile {
            name: model.name.clone(),
            dim,
            h_indices: model.h_idx.clone(),
            m_indices: model.m_idx.clone(),
            structure_constants,
            metric_m: model.metric_m.to_nested(),
            q: model.q.to_nested(),
            params: model.params.clone(),
        }
    }
}

pub fn load_model_str(json: &str) -> std::result::Result<ReductiveModel, ModelFileError> {
    let file: ModelFile = serde_json::from_str(json)?;
    file.into_model()
}

pub fn load_model_path(path: &std::path::Path) -> std::result::Result<ReductiveModel, ModelFileError> {
    let text = std::fs::read_to_string(path)?;
    load_model_str(&text)
}

pub fn save_model_string(model: &ReductiveModel) -> String {
    serde_json::to_string_pretty(&ModelFile::from_model(model)).expect("serializable")
}

/// Per-t bundle of connection data.
#[derive(Debug, Clone, Serialize)]
pub struct ConnectionReport {
    pub t: f64,
    /// Nonzero torsion 3-form coefficients on increasing index triples.
    pub torsion: Vec<TorsionEntry>,
    pub torsion_is_three_form: bool,
    pub ricci: Vec<Vec<f64>>,
    pub scalar: f64,
    pub holonomy_dim: usize,
    pub self_adjointness_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TorsionEntry {
    pub indices: [usize; 3],
    pub value: f64,
}

pub fn connection_report(model: &ReductiveModel, t: f64) -> Result<ConnectionReport> {
    let onb = model.orthonormalized()?;
    let conn = lambda_t(&onb, t);
    let tors = torsion(&onb, &conn);
    let mut entries = Vec::new();
    for combo in crate::forms::combinations(onb.n(), 3) {
        let v = tors.form.get(combo[0], combo[1], combo[2]);
        if v.abs() > 1e-14 {
            entries.push(TorsionEntry {
                indices: [combo[0], combo[1], combo[2]],
                value: v,
            });
        }
    }
    let ric = connection::ricci(&onb, t)?;
    let scalar = connection::scal(&onb, t)?;
    let hol = holonomy_algebra(&onb, &conn)?;
    let sa = self_adjointness_check(&onb, &conn, crate::tol::DEFAULT_TOL);
    Ok(ConnectionReport {
        t,
        torsion: entries,
        torsion_is_three_form: tors.is_three_form(crate::tol::DEFAULT_TOL),
        ricci: ric.matrix.to_nested(),
        scalar,
        holonomy_dim: hol.dim,
        self_adjointness_residual: sa.residual,
    })
}

/// Everything the `report` command emits for one (model, t).
#[derive(Debug, Clone, Serialize)]
pub struct FullReport {
    pub model: String,
    pub params: BTreeMap<String, f64>,
    pub n: usize,
    pub connection: ConnectionReport,
    pub kp: KPReport,
    pub constant_spinor_dim: usize,
    pub eigenvalue_bound: EigenvalueBound,
    pub flags: Vec<VanishingFlag>,
}

pub fn full_report(model: &ReductiveModel, t: f64) -> Result<FullReport> {
    let connection = connection_report(model, t)?;
    let kp = kp_report(model, t)?;
    let rep = crate::clifford::SpinorRep::generated(model.n())?;
    let spinors = crate::dirac::constant_spinors(model, &rep)?;
    let bound = eigenvalue_bound(model)?;
    let flags = vanishing_theorem_flags(model)?;
    Ok(FullReport {
        model: model.name.clone(),
        params: model.params.clone(),
        n: model.n(),
        connection,
        kp,
        constant_spinor_dim: spinors.len(),
        eigenvalue_bound: bound,
        flags,
    })
}

/// Parse one `k=v` parameter assignment.
pub fn parse_param_assignment(entry: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = entry
        .split_once('=')
        .ok_or_else(|| format!("bad parameter '{entry}', expected k=v"))?;
    let value: f64 = v
        .trim()
        .parse()
        .map_err(|_| format!("bad numeric value in '{entry}'"))?;
    if !value.is_finite() {
        return Err(format!("non-finite value in '{entry}'"));
    }
    let key = k.trim();
    if key.is_empty() {
        return Err(format!("empty parameter name in '{entry}'"));
    }
    Ok((key.to_string(), value))
}

/// Parse a grid: `a:b:step` (inclusive) or a comma-separated value list.
pub fn parse_grid_spec(spec: &str) -> std::result::Result<Vec<f64>, String> {
    let spec = spec.trim();
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("bad grid '{spec}', expected a:b:step"));
        }
        let a: f64 = parts[0].trim().parse().map_err(|_| format!("bad grid '{spec}'"))?;
        let b: f64 = parts[1].trim().parse().map_err(|_| format!("bad grid '{spec}'"))?;
        let step: f64 = parts[2].trim().parse().map_err(|_| format!("bad grid '{spec}'"))?;
        if !(step > 0.0) || !a.is_finite() || !b.is_finite() {
            return Err(format!("bad grid '{spec}': need finite bounds and step > 0"));
        }
        let count = ((b - a) / step + 1e-9).floor();
        if !(0.0..=100_000.0).contains(&count) {
            return Err(format!("grid '{spec}' is empty or has too many points"));
        }
        Ok((0..=count as usize).map(|i| a + step * i as f64).collect())
    } else {
        let values: std::result::Result<Vec<f64>, String> = spec
            .split(',')
            .map(|v| {
                let x: f64 = v
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad grid value '{v}'"))?;
                if x.is_finite() {
                    Ok(x)
                } else {
                    Err(format!("non-finite grid value '{v}'"))
                }
            })
            .collect();
        let values = values?;
        if values.is_empty() {
            return Err("empty grid".to_string());
        }
        Ok(values)
    }
}

/// Resolve a builtin model by name and parameter map.
pub fn builtin_model(name: &str, params: &BTreeMap<String, f64>) -> Result<ReductiveModel> {
    let get = |key: &str, default: Option<f64>| -> Result<f64> {
        params
            .get(key)
            .copied()
            .or(default)
            .ok_or_else(|| GeomError::BadParameter(format!("missing parameter '{key}'")))
    };
    match name {
        "jensen" => crate::models::stiefel_jensen(get("s", Some(0.5))?),
        "chavel-ziller" => crate::models::chavel_ziller(get("s", Some(0.5))?),
        "su2" => Ok(crate::models::su2(get("scale", Some(1.0))?)),
        "round-sphere" => {
            let n = get("n", Some(4.0))?;
            if n.fract() != 0.0 || n < 1.0 {
                return Err(GeomError::BadParameter(format!(
                    "sphere dimension must be a positive integer, got {n}"
                )));
            }
            crate::models::round_sphere(n as usize)
        }
        other => Err(GeomError::WrongModel(format!(
            "unknown builtin '{other}'; available: jensen, chavel-ziller, su2, round-sphere"
        ))),
    }
}
