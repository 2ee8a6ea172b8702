use std::time::Duration;

use rayon::prelude::*;

use super::shd;
use crate::ci::CiProvider;
use crate::discovery::{run, Algorithm, RunSettings};
use crate::error::Result;
use crate::graph::{essential_graph, max_undirected_clique};
use crate::sem::random_dag;

/// Random-DAG instances: one per `(p, density, seed)`.
#[derive(Debug, Clone)]
pub struct InstanceFamily {
    pub ps: Vec<usize>,
    pub densities: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunStatus {
    Ok,
    /// The run returned but stopped at a search limit.
    Unconverged,
    Failed(String),
}

impl RunStatus {
    fn label(&self) -> String {
        match self {
            RunStatus::Ok => "ok".into(),
            RunStatus::Unconverged => "unconverged".into(),
            RunStatus::Failed(msg) => format!("failed: {msg}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub instance: String,
    pub p: usize,
    /// Largest undirected clique of the true essential graph.
    pub s: usize,
    pub algorithm: Algorithm,
    pub ci_queries: Option<u64>,
    /// Against the true essential graph.
    pub shd: Option<usize>,
    pub elapsed: Option<Duration>,
    pub status: RunStatus,
}

/// Rows ordered by instance (family order: p, then density, then seed) and
/// then by algorithm in the order requested.
#[derive(Debug, Clone)]
pub struct BenchTable {
    pub rows: Vec<BenchRow>,
}

pub const TSV_COLUMNS: [&str; 8] = [
    "instance",
    "p",
    "s",
    "algorithm",
    "ci_queries",
    "shd",
    "elapsed_ms",
    "status",
];

impl BenchTable {
    /// Tab-separated table with a header row. Missing values are written as
    /// `-`; `elapsed_ms` is written only when `timing` is set, so the default
    /// output is reproducible byte for byte.
    pub fn to_tsv(&self, timing: bool) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .delimiter(b'\t')
            .from_writer(Vec::new());
        w.write_record(TSV_COLUMNS)?;
        let dash = || "-".to_string();
        for r in &self.rows {
            w.write_record([
                r.instance.clone(),
                r.p.to_string(),
                r.s.to_string(),
                r.algorithm.name().to_string(),
                r.ci_queries.map_or_else(dash, |q| q.to_string()),
                r.shd.map_or_else(dash, |d| d.to_string()),
                r.elapsed
                    .filter(|_| timing)
                    .map_or_else(dash, |e| format!("{:.3}", e.as_secs_f64() * 1e3)),
                r.status.label(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("table is UTF-8"))
    }
}

/// Runs each algorithm with the d-separation oracle on every instance of
/// the family. A failing run is recorded as a row, not returned as an error.
/// GSP's initial permutation is seeded by the instance seed.
pub fn ci_count_benchmark(
    algorithms: &[Algorithm],
    family: &InstanceFamily,
    seeds: &[u64],
    settings: &RunSettings,
) -> Result<BenchTable> {
    let mut instances = Vec::new();
    for &p in &family.ps {
        for &density in &family.densities {
            for &seed in seeds {
                let dag = random_dag(p, density, seed)?;
                instances.push((format!("p{p}-d{density}-s{seed}"), seed, dag));
            }
        }
    }
    let jobs: Vec<_> = instances
        .iter()
        .flat_map(|inst| algorithms.iter().map(move |&a| (inst, a)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|((name, seed, dag), algorithm)| {
            let truth = essential_graph(dag);
            let provider = CiProvider::oracle(dag.clone());
            let settings = RunSettings {
                seed: *seed,
                ..settings.clone()
            };
            let mut row = BenchRow {
                instance: name.clone(),
                p: dag.p(),
                s: max_undirected_clique(&truth),
                algorithm: *algorithm,
                ci_queries: None,
                shd: None,
                elapsed: None,
                status: RunStatus::Ok,
            };
            match run(*algorithm, &provider, &settings) {
                Ok(report) => {
                    row.ci_queries = Some(report.ci_queries);
                    row.shd = Some(shd(&report.output, &truth).expect("same node count"));
                    row.elapsed = Some(report.elapsed);
                    if !report.converged {
                        row.status = RunStatus::Unconverged;
                    }
                }
                Err(e) => row.status = RunStatus::Failed(e.to_string()),
            }
            row
        })
        .collect();
    Ok(BenchTable { rows })
}
