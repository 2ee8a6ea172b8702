//! Structure learning over any [`CiProvider`]: PC, SP, GSP and GAS, plus
//! interventional orientation of an essential graph.

mod gas;
mod gsp;
mod imap;
mod orient;
mod pc;
mod sp;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde_json::Value;

use crate::ci::CiProvider;
use crate::error::{Error, Result};
use crate::graph::{NodeSet, Pdag};

pub use gas::{gas, GasConfig};
pub use gsp::{gsp, GspConfig, DEFAULT_GSP_DEPTH, DEFAULT_GSP_RESTARTS};
pub use imap::minimal_imap;
pub use orient::{interventional_orient, InterventionOutcome};
pub use pc::{pc, PcConfig};
pub use sp::{sp, DEFAULT_SP_GUARD};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    Pc,
    Sp,
    Gsp,
    Gas,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Pc, Algorithm::Sp, Algorithm::Gsp, Algorithm::Gas];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Pc => "pc",
            Algorithm::Sp => "sp",
            Algorithm::Gsp => "gsp",
            Algorithm::Gas => "gas",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pc" => Ok(Algorithm::Pc),
            "sp" => Ok(Algorithm::Sp),
            "gsp" => Ok(Algorithm::Gsp),
            "gas" => Ok(Algorithm::Gas),
            other => Err(Error::InvalidParameter(format!(
                "unknown algorithm '{other}' (expected pc, sp, gsp or gas)"
            ))),
        }
    }
}

/// Output of one discovery run.
#[derive(Debug, Clone)]
pub struct DiscoveryReport {
    pub algorithm: Algorithm,
    pub output: Pdag,
    /// Provider counter delta over the run.
    pub ci_queries: u64,
    pub elapsed: Duration,
    /// Echo of the run's configuration.
    pub config: BTreeMap<String, Value>,
    /// `false` when a search stopped at a limit rather than at a fixpoint.
    pub converged: bool,
    /// GAS only: the prefix sets `S_0 = ∅ ⊆ S_1 ⊆ … ⊆ S_L = [p]`.
    pub prefix_sets: Option<Vec<NodeSet>>,
}

/// Runs `body` and wraps its output with timing and query accounting.
pub(crate) fn run_with_accounting(
    algorithm: Algorithm,
    provider: &CiProvider,
    config: BTreeMap<String, Value>,
    body: impl FnOnce() -> Result<RunOutput>,
) -> Result<DiscoveryReport> {
    let before = provider.count();
    let start = Instant::now();
    let out = body()?;
    Ok(DiscoveryReport {
        algorithm,
        output: out.output,
        ci_queries: provider.count() - before,
        elapsed: start.elapsed(),
        config,
        converged: out.converged,
        prefix_sets: out.prefix_sets,
    })
}

pub(crate) struct RunOutput {
    pub output: Pdag,
    pub converged: bool,
    pub prefix_sets: Option<Vec<NodeSet>>,
}

impl RunOutput {
    pub fn done(output: Pdag) -> Self {
        RunOutput {
            output,
            converged: true,
            prefix_sets: None,
        }
    }
}

/// Settings shared by [`run`].
#[derive(Debug, Clone)]
pub struct RunSettings {
    pub seed: u64,
    pub sp_guard: usize,
    pub gsp_depth: usize,
    pub gsp_restarts: usize,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            seed: 0,
            sp_guard: DEFAULT_SP_GUARD,
            gsp_depth: DEFAULT_GSP_DEPTH,
            gsp_restarts: DEFAULT_GSP_RESTARTS,
        }
    }
}

/// Dispatches to one algorithm with the given settings.
pub fn run(algorithm: Algorithm, provider: &CiProvider, settings: &RunSettings) -> Result<DiscoveryReport> {
    match algorithm {
        Algorithm::Pc => pc(provider, &PcConfig::default()),
        Algorithm::Sp => sp(provider, settings.sp_guard),
        Algorithm::Gsp => gsp(
            provider,
            &GspConfig {
                depth: settings.gsp_depth,
                restarts: settings.gsp_restarts,
                seed: settings.seed,
                initial: None,
            },
        ),
        Algorithm::Gas => gas(provider, &GasConfig::default()),
    }
}
