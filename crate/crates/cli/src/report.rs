//! Machine-readable run reports. Every variant has a fixed key set; absent
//! optional values are written as `null` rather than omitted.

use entnorm::criteria::DetectionReport;
use entnorm::dualnorms::{ConjectureReport, SnVerdict, WitnessTarget};
use entnorm::interval::Method;
use entnorm::sknorm::BlockVerdict;
use entnorm::states::EnsembleKind;
use entnorm::symmetry::InvarianceReport;
use serde::Serialize;
use serde_json::Value;

use crate::io::FileKind;

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub tol: f64,
    pub seesaw_tol: f64,
    pub restarts: usize,
    pub max_iter: usize,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ResultBody {
    Schmidt {
        dims: [usize; 2],
        coefficients: Vec<f64>,
        rank: usize,
        norm: f64,
    },
    Scalar {
        norm: String,
        value: f64,
        method: Method,
    },
    Interval {
        norm: String,
        lower: f64,
        upper: f64,
        lower_method: Method,
        upper_method: Method,
        exact: bool,
        width: f64,
    },
    Robustness {
        lower: f64,
        upper: f64,
        lower_method: Method,
        upper_method: Method,
        exact: bool,
        /// Bounds on `(R − 1)/2`.
        e_lower: f64,
        e_upper: f64,
    },
    Detection(DetectionReport),
    BlockPositivity {
        verdict: BlockVerdict,
        c: f64,
        lower: f64,
        upper: f64,
        witness_value: Option<f64>,
        witness: Option<Value>,
        tol: f64,
    },
    Witness {
        label: String,
        target: WitnessTarget,
        pairing: f64,
        dual_upper: f64,
        lower_bound: f64,
        operator: Value,
    },
    Oracle {
        upper: f64,
        lp_value: f64,
        terms: usize,
        residual: f64,
        generators_tried: usize,
        retried: bool,
        budget: usize,
    },
    Conjecture(ConjectureReport),
    Certificate {
        verdict: SnVerdict,
        lower: f64,
        upper: f64,
        lower_method: Method,
        upper_method: Method,
        evidence: String,
        tol: f64,
    },
    Generated {
        kind: EnsembleKind,
        dims: [usize; 2],
        file_kind: FileKind,
        path: String,
        sha256: String,
    },
    Invariance(InvarianceReport),
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub k: Option<usize>,
    pub result: ResultBody,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub warnings: Vec<String>,
    pub wall_time_ms: u64,
}

pub fn to_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

fn text_lines(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (key, val) in map {
                let p = if prefix.is_empty() { key.clone() } else { format!("{prefix}.{key}") };
                text_lines(val, &p, out);
            }
        }
        // long numeric arrays (matrices, vectors) stay on one line
        Value::Array(items) if items.iter().any(|i| i.is_object()) => {
            for (i, item) in items.iter().enumerate() {
                text_lines(item, &format!("{prefix}[{i}]"), out);
            }
        }
        other => out.push_str(&format!("{prefix}: {other}\n")),
    }
}

/// Flat `key.path: value` listing for people; not a stable format.
pub fn to_text(report: &Report) -> String {
    let mut out = String::new();
    text_lines(&serde_json::to_value(report).expect("reports serialize"), "", &mut out);
    out
}
