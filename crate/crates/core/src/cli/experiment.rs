//! Experiment files and the end-to-end pipeline behind `run` and `sweep`.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::entanglement::{analyze_with, EntanglementReport, ProductDecomposition};
use crate::error::{Error, Result};
use crate::io::{sig17, sig17_opt};
use crate::linalg::frobenius;
use crate::projective::{dim_sections, SectionBasis};
use crate::quadrature::{Submanifold, SubmanifoldSpec};
use crate::states::{coherent_mixture, restriction_gram_with, rho_from_gram_with, DensityMatrix, Execution};
use crate::tolerance::Tolerances;

pub const SCHEMA_VERSION: u32 = 1;

/// Consecutive-refinement residual above which a result carries a warning.
pub const CONVERGENCE_WARNING: f64 = 1e-6;

/// `N` in an experiment file: a single power, a list, or `{"from", "to"}`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Powers {
    One(u32),
    List(Vec<u32>),
    Range { from: u32, to: u32 },
}

impl Powers {
    pub fn values(&self) -> Vec<u32> {
        match self {
            Powers::One(n) => vec![*n],
            Powers::List(v) => v.clone(),
            Powers::Range { from, to } => (*from..=*to).collect(),
        }
    }
}

/// A parsed experiment file.
///
/// ```json
/// {"schema": 1, "n1": 1, "n2": 1, "N": [1, 2],
///  "submanifold": {"kind": "diagonal_circle", "params": {"radius": 1.0}, "nodes": 64}}
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub n1: usize,
    pub n2: usize,
    pub powers: Vec<u32>,
    pub submanifold: SubmanifoldSpec<f64>,
    /// Nodes per parameter dimension; `None` uses the per-kind defaults.
    pub nodes: Option<usize>,
    /// Verdict threshold.
    pub tolerance: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    schema: u32,
    n1: usize,
    n2: usize,
    #[serde(rename = "N")]
    powers: Powers,
    submanifold: Value,
    #[serde(default)]
    tolerance: Option<f64>,
}

fn spec_err(e: impl std::fmt::Display) -> Error {
    Error::Spec(e.to_string())
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_value(serde_json::from_str(text).map_err(spec_err)?)
    }

    pub fn from_value(value: Value) -> Result<Self> {
        let raw: RawSpec = serde_json::from_value(value).map_err(spec_err)?;
        if raw.schema != SCHEMA_VERSION {
            return Err(Error::Spec(format!(
                "unsupported schema {}, expected {SCHEMA_VERSION}",
                raw.schema
            )));
        }
        if raw.n1 == 0 || raw.n2 == 0 {
            return Err(Error::Spec("n1 and n2 must be at least 1".into()));
        }
        let powers = raw.powers.values();
        if powers.is_empty() || powers.contains(&0) {
            return Err(Error::Spec("N must be a nonempty list of positive integers".into()));
        }
        let mut sub = match raw.submanifold {
            Value::Object(map) => map,
            _ => return Err(Error::Spec("submanifold must be an object".into())),
        };
        let nodes = match sub.remove("nodes") {
            None | Some(Value::Null) => None,
            Some(v) => Some(serde_json::from_value::<usize>(v).map_err(|e| spec_err(format!("nodes: {e}")))?),
        };
        let submanifold =
            serde_json::from_value(Value::Object(sub)).map_err(|e| spec_err(format!("submanifold: {e}")))?;
        if let Some(t) = raw.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Spec("tolerance must be positive".into()));
            }
        }
        Ok(Self {
            n1: raw.n1,
            n2: raw.n2,
            powers,
            submanifold,
            nodes,
            tolerance: raw.tolerance,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Dims {
    pub d1: usize,
    pub d2: usize,
    #[serde(rename = "dN")]
    pub d_n: usize,
}

/// `(d_N^(1), d_N^(2), d_N)` for `P^{n1} x P^{n2}`.
pub fn dims(n1: i64, n2: i64, power: i64) -> Result<Dims> {
    let d1 = dim_sections(n1, power)? as usize;
    let d2 = dim_sections(n2, power)? as usize;
    Ok(Dims { d1, d2, d_n: d1 * d2 })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Convergence {
    pub nodes: Vec<usize>,
    pub refined_nodes: Vec<usize>,
    /// Frobenius distance between the states at `nodes` and `refined_nodes`.
    #[serde(serialize_with = "sig17")]
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    #[serde(rename = "N")]
    pub power: u32,
    pub dims: Dims,
    #[serde(serialize_with = "sig17")]
    pub gram_trace: f64,
    pub report: EntanglementReport<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<DensityMatrix<f64>>,
    pub convergence: Convergence,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "sig17_opt")]
    pub wall_time_s: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    /// Overrides the nodes in the experiment file.
    pub nodes: Option<usize>,
    /// Overrides the tolerance in the experiment file.
    pub tolerance: Option<f64>,
    /// Sequential reduction and no wall time in the output.
    pub deterministic: bool,
    pub emit_matrix: bool,
    /// Matrices with `d_N` above this are left out even with `emit_matrix`.
    pub max_matrix_dim: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            nodes: None,
            tolerance: None,
            deterministic: true,
            emit_matrix: false,
            max_matrix_dim: 1024,
        }
    }
}

/// Restriction state and report for one power.
pub fn run_one(spec: &ExperimentSpec, power: u32, opts: &RunOptions) -> Result<ExperimentResult> {
    let start = Instant::now();
    let tol = match opts.tolerance.or(spec.tolerance) {
        Some(t) => Tolerances::with_verdict(t),
        None => Tolerances::default(),
    };
    let exec = if opts.deterministic {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let first = SectionBasis::<f64>::new(spec.n1, power)?;
    let second = SectionBasis::<f64>::new(spec.n2, power)?;
    let sub = Submanifold::new(spec.submanifold.clone(), spec.n1, spec.n2)?;
    let rule = sub.rule(power, opts.nodes.or(spec.nodes))?;
    let gram = restriction_gram_with(&first, &second, &sub, &rule, exec)?;
    let rho = rho_from_gram_with(&gram, &tol)?;

    let refined = rule.refined()?;
    let rho_refined = rho_from_gram_with(&restriction_gram_with(&first, &second, &sub, &refined, exec)?, &tol)?;
    let residual = frobenius(&(rho.matrix() - rho_refined.matrix()));

    let certificate = ProductDecomposition::from_mixture(&coherent_mixture(&first, &second, &sub, &rule)?)?;
    let report = analyze_with(&rho, &tol, Some(&certificate))?;

    let dims = Dims {
        d1: first.len(),
        d2: second.len(),
        d_n: first.len() * second.len(),
    };
    let mut warnings = Vec::new();
    if !(residual <= CONVERGENCE_WARNING) {
        warnings.push(format!(
            "quadrature not converged: residual {residual:e} between {:?} and {:?} nodes",
            rule.counts(),
            refined.counts()
        ));
    }
    let rho = if !opts.emit_matrix {
        None
    } else if dims.d_n > opts.max_matrix_dim {
        warnings.push(format!(
            "matrix of dimension {} elided (limit {})",
            dims.d_n, opts.max_matrix_dim
        ));
        None
    } else {
        Some(rho)
    };
    Ok(ExperimentResult {
        power,
        dims,
        gram_trace: gram.trace(),
        report,
        rho,
        convergence: Convergence {
            nodes: rule.counts().to_vec(),
            refined_nodes: refined.counts().to_vec(),
            residual,
        },
        warnings,
        wall_time_s: (!opts.deterministic).then(|| start.elapsed().as_secs_f64()),
    })
}

/// All powers of the experiment; stops at the first failure.
pub fn run_experiment(spec: &ExperimentSpec, opts: &RunOptions) -> Result<Vec<ExperimentResult>> {
    spec.powers.iter().map(|&p| run_one(spec, p, opts)).collect()
}

/// Sets a sweep parameter in an experiment file. `N` and `nodes` are
/// top-level; anything else is a dotted path below `submanifold.params`.
pub fn set_parameter(doc: &Value, name: &str, value: f64) -> Result<Value> {
    let mut doc = doc.clone();
    let as_int = || {
        if value >= 0.0 && value.fract() == 0.0 && value <= u32::MAX as f64 {
            Ok(Value::from(value as u64))
        } else {
            Err(Error::Spec(format!(
                "{name} must be a nonnegative integer, got {value}"
            )))
        }
    };
    let number = if value.fract() == 0.0 && value.abs() < 1e15 {
        Value::from(value as i64)
    } else {
        serde_json::Number::from_f64(value)
            .map(Value::Number)
            .ok_or_else(|| spec_err("non-finite value"))?
    };
    let obj = doc
        .as_object_mut()
        .ok_or_else(|| spec_err("experiment must be an object"))?;
    match name {
        "N" => {
            obj.insert("N".into(), as_int()?);
        }
        "nodes" => {
            let sub = obj
                .get_mut("submanifold")
                .and_then(Value::as_object_mut)
                .ok_or_else(|| spec_err("missing submanifold"))?;
            sub.insert("nodes".into(), as_int()?);
        }
        path => {
            let mut cur = obj
                .get_mut("submanifold")
                .and_then(|s| s.get_mut("params"))
                .ok_or_else(|| spec_err(format!("submanifold has no params to set {path}")))?;
            let keys: Vec<&str> = path.split('.').collect();
            for key in &keys[..keys.len() - 1] {
                cur = cur
                    .get_mut(*key)
                    .ok_or_else(|| spec_err(format!("no parameter {path}")))?;
            }
            let last = keys[keys.len() - 1];
            let slot = cur
                .as_object_mut()
                .and_then(|m| m.get_mut(last))
                .ok_or_else(|| spec_err(format!("no parameter {path}")))?;
            if !slot.is_number() {
                return Err(spec_err(format!("parameter {path} is not a number")));
            }
            *slot = number;
        }
    }
    Ok(doc)
}
