use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "causalkit", version, about = "Causal structure discovery toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a random DAG and linear-Gaussian SEM (or load a SEM) and sample from it.
    Simulate(SimulateArgs),
    /// Learn an essential graph with PC, SP, GSP or GAS.
    Discover(DiscoverArgs),
    /// Orient the undirected edges of an essential graph from interventions.
    OrientInterventional(OrientArgs),
    /// Structural Hamming distance between two graphs.
    Eval(EvalArgs),
    /// Unfaithfulness volume of the fully connected three-node SEM.
    FaithfulnessVolume(VolumeArgs),
    /// CI-query counts of the discovery algorithms on random oracle instances.
    CiBench(BenchArgs),
    /// Essential graph and Markov equivalence class of a DAG.
    Mec(MecArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::Discover(_) => "discover",
            Command::OrientInterventional(_) => "orient-interventional",
            Command::Eval(_) => "eval",
            Command::FaithfulnessVolume(_) => "faithfulness-volume",
            Command::CiBench(_) => "ci-bench",
            Command::Mec(_) => "mec",
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    /// Number of nodes of the random DAG.
    #[arg(long, required_unless_present = "sem", conflicts_with = "sem")]
    pub p: Option<usize>,
    /// Edge probability of the random DAG.
    #[arg(long, default_value_t = 0.3, conflicts_with = "sem")]
    pub density: f64,
    /// Number of samples.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Smallest absolute edge weight.
    #[arg(long, default_value_t = 0.25, conflicts_with = "sem")]
    pub weight_low: f64,
    /// Largest absolute edge weight.
    #[arg(long, default_value_t = 1.0, conflicts_with = "sem")]
    pub weight_high: f64,
    /// Use this SEM instead of drawing one.
    #[arg(long)]
    pub sem: Option<PathBuf>,
    /// Sample from the SEM under this intervention.
    #[arg(long)]
    pub intervention: Option<PathBuf>,
    /// Samples CSV.
    #[arg(long)]
    pub out_data: Option<PathBuf>,
    /// The DAG of the (observational) SEM.
    #[arg(long)]
    pub out_graph: Option<PathBuf>,
    /// The (observational) SEM.
    #[arg(long)]
    pub out_sem: Option<PathBuf>,
    /// Exact covariance of the sampled regime.
    #[arg(long)]
    pub out_covariance: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgoArg {
    Pc,
    Sp,
    Gsp,
    Gas,
}

/// GSP search depth: a positive integer, or `full` to search the whole class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Depth {
    Limit(usize),
    Full(FullTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FullTag {
    Full,
}

impl Depth {
    pub fn value(self) -> usize {
        match self {
            Depth::Limit(d) => d,
            Depth::Full(_) => usize::MAX,
        }
    }
}

pub fn parse_depth(s: &str) -> Result<Depth, String> {
    if s == "full" {
        return Ok(Depth::Full(FullTag::Full));
    }
    match s.parse::<usize>() {
        Ok(d) if d >= 1 => Ok(Depth::Limit(d)),
        _ => Err(format!("expected a positive integer or 'full', got '{s}'")),
    }
}

#[derive(Debug, Args, Serialize)]
pub struct SearchLimits {
    /// Largest p for which SP enumerates all permutations.
    #[arg(long, default_value_t = 7)]
    pub sp_max_p: usize,
    /// GSP reversal depth: a positive integer or `full`.
    #[arg(long, default_value = "4", value_parser = parse_depth)]
    pub gsp_depth: Depth,
    /// GSP searches from independent initial permutations; the sparsest wins.
    #[arg(long, default_value_t = 8, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    pub gsp_restarts: usize,
}

#[derive(Debug, Args, Serialize)]
#[group(id = "source", required = true, multiple = false)]
pub struct CiSourceArgs {
    /// d-separation oracle on this DAG.
    #[arg(long, group = "source")]
    pub oracle: Option<PathBuf>,
    /// Fisher-z tests on this samples CSV.
    #[arg(long, group = "source")]
    pub data: Option<PathBuf>,
    /// Vanishing partial correlations of this covariance matrix.
    #[arg(long, group = "source")]
    pub covariance: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct DiscoverArgs {
    #[arg(long = "algo", value_enum)]
    pub algorithm: AlgoArg,
    #[command(flatten)]
    pub source: CiSourceArgs,
    /// Significance level of the Fisher-z tests.
    #[arg(long, requires = "data")]
    pub alpha: Option<f64>,
    /// Zero threshold of the covariance oracle.
    #[arg(long, requires = "covariance")]
    pub tolerance: Option<f64>,
    /// Seeds GSP's initial permutation.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub limits: SearchLimits,
    /// Record wall-clock time in the report (makes it non-reproducible).
    #[arg(long)]
    pub timing: bool,
    #[arg(long)]
    pub report: PathBuf,
    /// Also write the learned graph on its own.
    #[arg(long)]
    pub out_graph: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct OrientArgs {
    /// Essential graph to orient.
    #[arg(long)]
    pub graph: PathBuf,
    /// Intervention files, one per regime.
    #[arg(long = "intervention", required = true)]
    pub interventions: Vec<PathBuf>,
    /// Exact mode: compare exact marginals of this SEM.
    #[arg(long, conflicts_with_all = ["data", "intervention_data"], required_unless_present = "data")]
    pub sem: Option<PathBuf>,
    /// Sample mode: observational samples CSV.
    #[arg(long, requires = "intervention_data")]
    pub data: Option<PathBuf>,
    /// Sample mode: samples CSV of each regime, in the order of --intervention.
    #[arg(long = "intervention-data")]
    pub intervention_data: Vec<PathBuf>,
    /// Significance level of the invariance tests (sample mode).
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    /// Moment tolerance (exact mode).
    #[arg(long, default_value_t = 1e-12)]
    pub tolerance: f64,
    #[arg(long)]
    pub out: PathBuf,
    /// Per-node invariance results.
    #[arg(long)]
    pub results: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct EvalArgs {
    #[arg(long)]
    pub truth: PathBuf,
    #[arg(long)]
    pub estimate: PathBuf,
    /// Compare against the essential graph of the (DAG) truth.
    #[arg(long)]
    pub essential: bool,
    /// Write the result here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct VolumeArgs {
    /// Thresholds; defaults to 0, 0.001, 0.01, 0.05, 0.1, 0.2.
    #[arg(long = "lambda", value_delimiter = ',')]
    pub lambdas: Vec<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub draws: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub box_low: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub box_high: f64,
    /// JSON lines, one per threshold.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct BenchArgs {
    #[arg(long = "algos", value_enum, value_delimiter = ',', default_value = "pc,sp,gsp,gas")]
    pub algorithms: Vec<AlgoArg>,
    /// Node counts.
    #[arg(long = "p", value_delimiter = ',', default_value = "4,5,6")]
    pub ps: Vec<usize>,
    /// Edge probabilities.
    #[arg(long = "density", value_delimiter = ',', default_value = "0.2,0.5,0.8")]
    pub densities: Vec<f64>,
    /// Instances per (p, density).
    #[arg(long, default_value_t = 10)]
    pub instances: u64,
    /// First instance seed; instance k uses seed + k.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub limits: SearchLimits,
    /// Fill the elapsed_ms column (makes the table non-reproducible).
    #[arg(long)]
    pub timing: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct MecArgs {
    /// A DAG.
    #[arg(long)]
    pub graph: PathBuf,
    /// Essential graph output.
    #[arg(long)]
    pub out: PathBuf,
    /// Also list every member DAG.
    #[arg(long)]
    pub members: Option<PathBuf>,
    /// Refuse to enumerate classes of graphs with more nodes than this.
    #[arg(long, default_value_t = 10)]
    pub mec_max_p: usize,
}
