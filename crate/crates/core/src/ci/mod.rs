//! Conditional-independence providers.
//!
//! A [`CiProvider`] wraps one answer source behind a single query interface,
//! caches answers under the canonical key `(min(i,j), max(i,j), S)` and
//! counts cache misses. Counting and cache insertion happen under one lock,
//! so concurrent callers never double-count a query.

pub mod stats;

use std::collections::HashMap;
use std::sync::Mutex;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::dsep::validate_query;
use crate::graph::{is_d_separated, Dag, NodeSet};

pub use stats::{
    exact_marginal_invariance, fisher_z_accepts, fisher_z_statistic, fisher_z_test,
    marginal_invariance_test, partial_correlation, sample_covariance, InvarianceResult,
};

/// Default zero tolerance of the covariance oracle.
pub const DEFAULT_COVARIANCE_TOLERANCE: f64 = 1e-8;

/// Default significance level for finite-sample discovery runs.
pub const DEFAULT_ALPHA: f64 = 0.01;

/// Something that can decide `X_i ⫫ X_j | X_S`.
pub trait CiSource: Send + Sync {
    fn p(&self) -> usize;
    /// `true` means independent.
    fn independent(&self, i: usize, j: usize, cond: NodeSet) -> Result<bool>;
    fn describe(&self) -> String;
}

/// d-separation in a known DAG.
pub struct DSepOracle {
    dag: Dag,
}

impl DSepOracle {
    pub fn new(dag: Dag) -> Self {
        DSepOracle { dag }
    }
}

impl CiSource for DSepOracle {
    fn p(&self) -> usize {
        self.dag.p()
    }

    fn independent(&self, i: usize, j: usize, cond: NodeSet) -> Result<bool> {
        is_d_separated(&self.dag, i, j, cond)
    }

    fn describe(&self) -> String {
        "d-separation oracle".into()
    }
}

/// Thresholded partial correlations of a known covariance matrix.
pub struct CovarianceOracle {
    cov: DMatrix<f64>,
    tol: f64,
}

impl CovarianceOracle {
    pub fn new(cov: DMatrix<f64>, tol: f64) -> Result<Self> {
        if !cov.is_square() || cov.nrows() == 0 {
            return Err(Error::Degenerate("covariance matrix must be square and non-empty".into()));
        }
        if !(tol >= 0.0) {
            return Err(Error::InvalidParameter(format!("tolerance must be ≥ 0, got {tol}")));
        }
        Ok(CovarianceOracle { cov, tol })
    }
}

impl CiSource for CovarianceOracle {
    fn p(&self) -> usize {
        self.cov.nrows()
    }

    fn independent(&self, i: usize, j: usize, cond: NodeSet) -> Result<bool> {
        Ok(partial_correlation(&self.cov, i, j, cond)?.abs() <= self.tol)
    }

    fn describe(&self) -> String {
        format!("covariance oracle (tol {})", self.tol)
    }
}

/// Fisher-z tests on a sample matrix. The sample covariance is computed once.
pub struct FisherZ {
    cov: DMatrix<f64>,
    n: usize,
    alpha: f64,
}

impl FisherZ {
    pub fn new(samples: &DMatrix<f64>, alpha: f64) -> Result<Self> {
        stats::check_alpha(alpha)?;
        if samples.ncols() == 0 || samples.nrows() < 4 {
            return Err(Error::Degenerate(format!(
                "sample matrix {}×{} is too small",
                samples.nrows(),
                samples.ncols()
            )));
        }
        Ok(FisherZ {
            cov: sample_covariance(samples),
            n: samples.nrows(),
            alpha,
        })
    }
}

impl CiSource for FisherZ {
    fn p(&self) -> usize {
        self.cov.nrows()
    }

    fn independent(&self, i: usize, j: usize, cond: NodeSet) -> Result<bool> {
        validate_query(self.p(), i, j, cond)?;
        for v in cond.with(i).with(j) {
            if !(self.cov[(v, v)] > 0.0) {
                return Err(Error::Degenerate(format!("column X{} is constant", v + 1)));
            }
        }
        let rho = partial_correlation(&self.cov, i, j, cond)?;
        fisher_z_accepts(rho, self.n, cond.len(), self.alpha)
    }

    fn describe(&self) -> String {
        format!("Fisher-z (n {}, alpha {})", self.n, self.alpha)
    }
}

#[derive(Default)]
struct CacheState {
    answers: HashMap<(usize, usize, NodeSet), bool>,
    misses: u64,
}

/// A [`CiSource`] with an answer cache and a query counter.
pub struct CiProvider {
    source: Box<dyn CiSource>,
    state: Mutex<CacheState>,
}

impl CiProvider {
    pub fn new(source: Box<dyn CiSource>) -> Self {
        CiProvider {
            source,
            state: Mutex::new(CacheState::default()),
        }
    }

    pub fn oracle(dag: Dag) -> Self {
        CiProvider::new(Box::new(DSepOracle::new(dag)))
    }

    pub fn covariance(cov: DMatrix<f64>, tol: f64) -> Result<Self> {
        Ok(CiProvider::new(Box::new(CovarianceOracle::new(cov, tol)?)))
    }

    pub fn samples(samples: &DMatrix<f64>, alpha: f64) -> Result<Self> {
        Ok(CiProvider::new(Box::new(FisherZ::new(samples, alpha)?)))
    }

    pub fn p(&self) -> usize {
        self.source.p()
    }

    pub fn describe(&self) -> String {
        self.source.describe()
    }

    /// Number of distinct queries answered so far.
    pub fn count(&self) -> u64 {
        self.state.lock().expect("poisoned CI cache").misses
    }

    /// `true` means `X_i ⫫ X_j | X_cond`.
    pub fn query(&self, i: usize, j: usize, cond: NodeSet) -> Result<bool> {
        validate_query(self.p(), i, j, cond)?;
        let key = (i.min(j), i.max(j), cond);
        if let Some(&ans) = self.state.lock().expect("poisoned CI cache").answers.get(&key) {
            return Ok(ans);
        }
        let ans = self.source.independent(key.0, key.1, cond)?;
        let mut state = self.state.lock().expect("poisoned CI cache");
        if let Some(&cached) = state.answers.get(&key) {
            return Ok(cached);
        }
        state.answers.insert(key, ans);
        state.misses += 1;
        Ok(ans)
    }

    pub fn dependent(&self, i: usize, j: usize, cond: NodeSet) -> Result<bool> {
        self.query(i, j, cond).map(|ind| !ind)
    }
}
