//! JSON operator files: `{"dims": [m, n], "kind": ..., "data": ..., "meta": {...}}`
//! with complex entries as `[re, im]` pairs, matrices row-major.

use std::collections::BTreeMap;
use std::path::Path;

use entnorm::linalg::{self, c, BipartiteOperator, ComplexMatrix, ComplexVector};
use entnorm::PureState;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Deviation from a valid density matrix tolerated with a warning. Beyond it
/// the file still loads, but commands that need a density refuse it.
pub const DENSITY_LOAD_TOL: f64 = 1e-6;
/// Deviation below which no warning is raised.
pub const DENSITY_QUIET_TOL: f64 = 1e-9;

/// `gap ≤ DENSITY_LOAD_TOL`, with room for the rounding in `1 − 0.999999`.
pub fn within_load_tol(gap: f64) -> bool {
    gap <= DENSITY_LOAD_TOL + 1e-15
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FileKind {
    StateVector,
    Operator,
    Density,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorFile {
    pub dims: [usize; 2],
    pub kind: FileKind,
    pub data: Value,
    #[serde(default)]
    pub meta: BTreeMap<String, String>,
}

#[derive(Debug, Clone)]
pub enum Loaded {
    State(PureState),
    Operator { op: BipartiteOperator, density: bool },
}

#[derive(Debug, Clone)]
pub struct LoadedFile {
    pub value: Loaded,
    pub warnings: Vec<String>,
    pub sha256: String,
    pub meta: BTreeMap<String, String>,
}

/// Error while reading or validating an operator file.
#[derive(Debug)]
pub struct FileError(pub String);

impl std::fmt::Display for FileError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn pair(v: &Value, path: &str) -> Result<linalg::C64, FileError> {
    let bad = || FileError(format!("{path}: expected a [re, im] pair of numbers"));
    let arr = v.as_array().ok_or_else(bad)?;
    if arr.len() != 2 {
        return Err(bad());
    }
    let re = arr[0].as_f64().ok_or_else(bad)?;
    let im = arr[1].as_f64().ok_or_else(bad)?;
    Ok(c(re, im))
}

fn array<'a>(v: &'a Value, len: usize, path: &str) -> Result<&'a Vec<Value>, FileError> {
    let arr = v.as_array().ok_or_else(|| FileError(format!("{path}: expected an array")))?;
    if arr.len() != len {
        return Err(FileError(format!("{path}: expected {len} entries, found {}", arr.len())));
    }
    Ok(arr)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn parse_operator_file(bytes: &[u8], origin: &str) -> Result<LoadedFile, FileError> {
    let file: OperatorFile =
        serde_json::from_slice(bytes).map_err(|e| FileError(format!("{origin}: not a valid operator file: {e}")))?;
    let [m, n] = file.dims;
    if m == 0 || n == 0 {
        return Err(FileError(format!("{origin}: dims: local dimensions must be positive")));
    }
    let d = m * n;
    let mut warnings = Vec::new();
    let value = match file.kind {
        FileKind::StateVector => {
            let arr = array(&file.data, d, "data")?;
            let entries = arr
                .iter()
                .enumerate()
                .map(|(i, z)| pair(z, &format!("data[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let amps = ComplexVector::from_vec(entries);
            let norm = amps.norm();
            if (norm - 1.0).abs() > DENSITY_QUIET_TOL {
                warnings.push(format!("state vector has norm {norm}; used as given"));
            }
            let state = PureState::unnormalized(amps, m, n).map_err(|e| FileError(format!("{origin}: {e}")))?;
            Loaded::State(state)
        }
        FileKind::Operator | FileKind::Density => {
            let rows = array(&file.data, d, "data")?;
            let mut mat = ComplexMatrix::zeros(d, d);
            for (i, row) in rows.iter().enumerate() {
                let row = array(row, d, &format!("data[{i}]"))?;
                for (j, z) in row.iter().enumerate() {
                    mat[(i, j)] = pair(z, &format!("data[{i}][{j}]"))?;
                }
            }
            let op = BipartiteOperator::new(mat, m, n).map_err(|e| FileError(format!("{origin}: {e}")))?;
            let density = file.kind == FileKind::Density;
            if density {
                density_warnings(&op, &mut warnings).map_err(|e| FileError(format!("{origin}: {e}")))?;
            }
            Loaded::Operator { op, density }
        }
    };
    Ok(LoadedFile { value, warnings, sha256: sha256_hex(bytes), meta: file.meta })
}

fn density_warnings(op: &BipartiteOperator, warnings: &mut Vec<String>) -> entnorm::Result<()> {
    let defect = linalg::hermitian_defect(op.mat());
    if defect > DENSITY_QUIET_TOL {
        warnings.push(format!("density is not Hermitian (defect {defect:.3e})"));
        return Ok(());
    }
    let tr = op.trace();
    if (tr.re - 1.0).abs() > DENSITY_QUIET_TOL || tr.im.abs() > DENSITY_QUIET_TOL {
        let hard = if !within_load_tol((tr.re - 1.0).abs()) { " (outside load tolerance)" } else { "" };
        warnings.push(format!("density trace is {}{hard}", tr.re));
    }
    let herm = op.symmetrized();
    let lmin = linalg::eig_hermitian(herm.mat())?.min();
    if lmin < -DENSITY_QUIET_TOL {
        let hard = if !within_load_tol(-lmin) { " (outside load tolerance)" } else { "" };
        warnings.push(format!("density has negative eigenvalue {lmin:.3e}{hard}"));
    }
    Ok(())
}

pub fn load_operator(path: &Path) -> Result<LoadedFile, FileError> {
    let bytes = std::fs::read(path).map_err(|e| FileError(format!("{}: {e}", path.display())))?;
    parse_operator_file(&bytes, &path.display().to_string())
}

fn pair_value(z: linalg::C64) -> Value {
    Value::Array(vec![Value::from(z.re), Value::from(z.im)])
}

pub fn state_file(v: &PureState, meta: BTreeMap<String, String>) -> OperatorFile {
    OperatorFile {
        dims: [v.dim_a(), v.dim_b()],
        kind: FileKind::StateVector,
        data: Value::Array(v.amplitudes().iter().map(|&z| pair_value(z)).collect()),
        meta,
    }
}

pub fn matrix_data(mat: &ComplexMatrix) -> Value {
    Value::Array(
        (0..mat.nrows())
            .map(|i| Value::Array((0..mat.ncols()).map(|j| pair_value(mat[(i, j)])).collect()))
            .collect(),
    )
}

pub fn operator_file(op: &BipartiteOperator, kind: FileKind, meta: BTreeMap<String, String>) -> OperatorFile {
    OperatorFile { dims: [op.dim_a(), op.dim_b()], kind, data: matrix_data(op.mat()), meta }
}

pub fn to_json_bytes(file: &OperatorFile) -> Vec<u8> {
    let mut out = serde_json::to_vec(file).expect("operator files serialize");
    out.push(b'\n');
    out
}
