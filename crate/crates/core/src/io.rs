//! File formats. Node labels are one-based in every format; edge and
//! target lists are written in lexicographic order.
//!
//! * graph: `{"p": 3, "directed": [[1, 3]], "undirected": [[1, 2]]}`
//! * covariance: `{"p": 2, "matrix": [[1.0, 0.5], [0.5, 1.0]]}`
//! * samples: CSV with header `X1,…,Xp`, one row per sample
//! * SEM: `{"p": 2, "edges": [[1, 2, 0.8]], "noise_vars": [...], "noise_means": [...]}`
//! * intervention: `{"targets": [{"node": 2, "kind": "do", "value": 0.0}]}`

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::ci::InvarianceResult;
use crate::discovery::DiscoveryReport;
use crate::error::{Error, Result};
use crate::graph::{Dag, Pdag};
use crate::sem::{Intervention, LinearGaussianSem, Mechanism};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub p: usize,
    #[serde(default)]
    pub directed: Vec<[usize; 2]>,
    #[serde(default)]
    pub undirected: Vec<[usize; 2]>,
}

fn to_zero_based(label: usize, p: usize) -> Result<usize> {
    if label == 0 || label > p {
        return Err(Error::Schema(format!(
            "node label {label} outside 1..={p}"
        )));
    }
    Ok(label - 1)
}

fn pairs_to_zero_based(pairs: &[[usize; 2]], p: usize) -> Result<Vec<(usize, usize)>> {
    pairs
        .iter()
        .map(|&[i, j]| Ok((to_zero_based(i, p)?, to_zero_based(j, p)?)))
        .collect()
}

fn one_based(edges: Vec<(usize, usize)>) -> Vec<[usize; 2]> {
    edges.into_iter().map(|(i, j)| [i + 1, j + 1]).collect()
}

impl GraphJson {
    pub fn from_pdag(g: &Pdag) -> Self {
        GraphJson {
            p: g.p(),
            directed: one_based(g.directed_edges()),
            undirected: one_based(g.undirected_edges()),
        }
    }

    pub fn from_dag(g: &Dag) -> Self {
        GraphJson {
            p: g.p(),
            directed: one_based(g.edges()),
            undirected: Vec::new(),
        }
    }

    pub fn to_pdag(&self) -> Result<Pdag> {
        Pdag::new(
            self.p,
            pairs_to_zero_based(&self.directed, self.p)?,
            pairs_to_zero_based(&self.undirected, self.p)?,
        )
    }

    /// Fails if any edge is undirected.
    pub fn to_dag(&self) -> Result<Dag> {
        if !self.undirected.is_empty() {
            return Err(Error::Schema(
                "expected a DAG but the graph has undirected edges".into(),
            ));
        }
        Dag::new(self.p, pairs_to_zero_based(&self.directed, self.p)?)
    }
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Schema(format!("invalid {what} JSON: {e}")))
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn parse_graph(text: &str) -> Result<GraphJson> {
    parse_json(text, "graph")
}

pub fn read_graph(path: &Path) -> Result<GraphJson> {
    parse_graph(&read_to_string(path)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovarianceJson {
    pub p: usize,
    pub matrix: Vec<Vec<f64>>,
}

impl CovarianceJson {
    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        CovarianceJson {
            p: m.nrows(),
            matrix: m.row_iter().map(|r| r.iter().copied().collect()).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<DMatrix<f64>> {
        if self.matrix.len() != self.p || self.matrix.iter().any(|r| r.len() != self.p) {
            return Err(Error::Schema(format!(
                "covariance matrix must be {0}x{0}",
                self.p
            )));
        }
        Ok(DMatrix::from_fn(self.p, self.p, |i, j| self.matrix[i][j]))
    }
}

pub fn parse_covariance(text: &str) -> Result<DMatrix<f64>> {
    parse_json::<CovarianceJson>(text, "covariance")?.to_matrix()
}

pub fn read_covariance(path: &Path) -> Result<DMatrix<f64>> {
    parse_covariance(&read_to_string(path)?)
}

/// Parses an `n × p` sample matrix; the header must be exactly `X1..Xp`.
pub fn parse_samples(text: &str) -> Result<DMatrix<f64>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    for (k, name) in header.iter().enumerate() {
        if name.trim() != format!("X{}", k + 1) {
            return Err(Error::Schema(format!(
                "column {} is named '{name}', expected 'X{}'",
                k + 1,
                k + 1
            )));
        }
    }
    let p = header.len();
    let mut values = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        for (k, field) in record.iter().enumerate() {
            let v: f64 = field.trim().parse().map_err(|_| {
                Error::Schema(format!(
                    "row {}, column X{}: '{field}' is not a number",
                    row + 1,
                    k + 1
                ))
            })?;
            if !v.is_finite() {
                return Err(Error::Schema(format!(
                    "row {}, column X{}: non-finite value",
                    row + 1,
                    k + 1
                )));
            }
            values.push(v);
        }
    }
    Ok(DMatrix::from_row_slice(values.len() / p.max(1), p, &values))
}

pub fn read_samples(path: &Path) -> Result<DMatrix<f64>> {
    parse_samples(&read_to_string(path)?)
}

pub fn samples_to_csv(samples: &DMatrix<f64>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record((1..=samples.ncols()).map(|k| format!("X{k}")))?;
    for row in samples.row_iter() {
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("CSV is UTF-8"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemJson {
    pub p: usize,
    pub edges: Vec<(usize, usize, f64)>,
    pub noise_vars: Vec<f64>,
    pub noise_means: Vec<f64>,
}

impl SemJson {
    pub fn from_sem(sem: &LinearGaussianSem) -> Self {
        SemJson {
            p: sem.p(),
            edges: sem
                .weights()
                .iter()
                .map(|(&(i, j), &a)| (i + 1, j + 1, a))
                .collect(),
            noise_vars: sem.noise_vars().to_vec(),
            noise_means: sem.noise_means().to_vec(),
        }
    }

    pub fn to_sem(&self) -> Result<LinearGaussianSem> {
        let mut weights = BTreeMap::new();
        for &(i, j, a) in &self.edges {
            let key = (to_zero_based(i, self.p)?, to_zero_based(j, self.p)?);
            if weights.insert(key, a).is_some() {
                return Err(Error::Schema(format!("edge {i}->{j} listed twice")));
            }
        }
        let dag = Dag::new(self.p, weights.keys().copied())?;
        LinearGaussianSem::new(dag, weights, self.noise_vars.clone(), self.noise_means.clone())
    }
}

pub fn parse_sem(text: &str) -> Result<LinearGaussianSem> {
    parse_json::<SemJson>(text, "SEM")?.to_sem()
}

pub fn read_sem(path: &Path) -> Result<LinearGaussianSem> {
    parse_sem(&read_to_string(path)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MechanismKind {
    Do,
    Shift,
    Scale,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetJson {
    pub node: usize,
    pub kind: MechanismKind,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterventionJson {
    pub targets: Vec<TargetJson>,
}

impl InterventionJson {
    pub fn from_intervention(interv: &Intervention) -> Self {
        let mut targets: Vec<TargetJson> = interv
            .targets
            .iter()
            .map(|&(k, mech)| {
                let (kind, value) = match mech {
                    Mechanism::Do(v) => (MechanismKind::Do, v),
                    Mechanism::Shift(v) => (MechanismKind::Shift, v),
                    Mechanism::ScaleNoise(v) => (MechanismKind::Scale, v),
                };
                TargetJson {
                    node: k + 1,
                    kind,
                    value,
                }
            })
            .collect();
        targets.sort_by_key(|t| t.node);
        InterventionJson { targets }
    }

    /// Node labels are checked against `p`.
    pub fn to_intervention(&self, p: usize) -> Result<Intervention> {
        let targets = self
            .targets
            .iter()
            .map(|t| {
                let mech = match t.kind {
                    MechanismKind::Do => Mechanism::Do(t.value),
                    MechanismKind::Shift => Mechanism::Shift(t.value),
                    MechanismKind::Scale => Mechanism::ScaleNoise(t.value),
                };
                Ok((to_zero_based(t.node, p)?, mech))
            })
            .collect::<Result<Vec<_>>>()?;
        let interv = Intervention { targets };
        interv.validate(p)?;
        Ok(interv)
    }
}

pub fn parse_intervention(text: &str) -> Result<InterventionJson> {
    parse_json(text, "intervention")
}

pub fn read_intervention(path: &Path) -> Result<InterventionJson> {
    parse_intervention(&read_to_string(path)?)
}

/// Report JSON. `elapsed_ms` is `null` unless `timing` is set, so reports
/// of identical runs are identical.
pub fn report_json(report: &DiscoveryReport, timing: bool) -> Value {
    let mut v = json!({
        "algorithm": report.algorithm.name(),
        "pdag": GraphJson::from_pdag(&report.output),
        "ci_queries": report.ci_queries,
        "elapsed_ms": if timing { json!(report.elapsed.as_secs_f64() * 1e3) } else { Value::Null },
        "converged": report.converged,
        "config": report.config,
        "version": env!("CARGO_PKG_VERSION"),
    });
    if let Some(prefixes) = &report.prefix_sets {
        v["prefix_sets"] = json!(prefixes
            .iter()
            .map(|s| s.iter().map(|k| k + 1).collect::<Vec<_>>())
            .collect::<Vec<_>>());
    }
    v
}

/// Invariance results with one-based node labels.
pub fn invariance_results_json(results: &[InvarianceResult]) -> Value {
    Value::Array(
        results
            .iter()
            .map(|r| {
                json!({
                    "intervention": r.intervention + 1,
                    "node": r.node + 1,
                    "changed": r.changed,
                    "statistic": r.statistic,
                    "p_value": r.p_value,
                })
            })
            .collect(),
    )
}
