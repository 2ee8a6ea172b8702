//! Linear-Gaussian structural equation models and interventions.
//!
//! `X_k = m_k + Σ_{i ∈ Pa(k)} a_ik X_i + ε_k`, `ε_k ~ N(0, σ_k²)`. A node with
//! `σ_k² = 0` and no parents is a point mass at `m_k` (the result of a
//! do-intervention).

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::graph::{Dag, NodeSet, Permutation};

/// Default box for random edge weights: `|a_ij| ∈ [0.25, 1]`.
pub const DEFAULT_WEIGHT_BOX: (f64, f64) = (0.25, 1.0);

/// Seeded RNG for stream `index` of `seed`. Parallel work units use distinct
/// indices so results do not depend on scheduling.
pub fn derived_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearGaussianSem {
    dag: Dag,
    weights: BTreeMap<(usize, usize), f64>,
    noise_vars: Vec<f64>,
    noise_means: Vec<f64>,
}

impl LinearGaussianSem {
    pub fn new(
        dag: Dag,
        weights: BTreeMap<(usize, usize), f64>,
        noise_vars: Vec<f64>,
        noise_means: Vec<f64>,
    ) -> Result<Self> {
        let p = dag.p();
        if noise_vars.len() != p || noise_means.len() != p {
            return Err(Error::InvalidParameter(format!(
                "expected {p} noise variances and means, got {} and {}",
                noise_vars.len(),
                noise_means.len()
            )));
        }
        if !weights.keys().copied().eq(dag.edges()) {
            return Err(Error::InvalidParameter(
                "weight support must equal the edge set".into(),
            ));
        }
        if weights.values().any(|w| !w.is_finite()) || noise_means.iter().any(|m| !m.is_finite()) {
            return Err(Error::InvalidParameter("non-finite parameter".into()));
        }
        for (k, &v) in noise_vars.iter().enumerate() {
            let ok = v > 0.0 && v.is_finite() || v == 0.0 && dag.parents(k).is_empty();
            if !ok {
                return Err(Error::InvalidParameter(format!(
                    "noise variance of X{} must be positive (zero only for a parentless node), got {v}",
                    k + 1
                )));
            }
        }
        Ok(LinearGaussianSem {
            dag,
            weights,
            noise_vars,
            noise_means,
        })
    }

    /// Unit noise variances, zero means.
    pub fn with_unit_noise(dag: Dag, weights: BTreeMap<(usize, usize), f64>) -> Result<Self> {
        let p = dag.p();
        LinearGaussianSem::new(dag, weights, vec![1.0; p], vec![0.0; p])
    }

    pub fn p(&self) -> usize {
        self.dag.p()
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn weights(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.weights
    }

    pub fn weight(&self, i: usize, j: usize) -> Option<f64> {
        self.weights.get(&(i, j)).copied()
    }

    pub fn noise_vars(&self) -> &[f64] {
        &self.noise_vars
    }

    pub fn noise_means(&self) -> &[f64] {
        &self.noise_means
    }

    /// Exact covariance, filled in topological order:
    /// `Σ_jk = Σ_{i ∈ Pa(k)} a_ik Σ_ji` for `j` before `k`, and
    /// `Σ_kk = σ_k² + Σ_{i,i' ∈ Pa(k)} a_ik a_i'k Σ_ii'`.
    pub fn covariance(&self) -> DMatrix<f64> {
        let p = self.p();
        let order = self.dag.topological_order();
        let mut cov = DMatrix::zeros(p, p);
        for (pos, &k) in order.as_slice().iter().enumerate() {
            let pa: Vec<(usize, f64)> = self
                .dag
                .parents(k)
                .iter()
                .map(|i| (i, self.weights[&(i, k)]))
                .collect();
            for &j in &order.as_slice()[..pos] {
                let c: f64 = pa.iter().map(|&(i, a)| a * cov[(j, i)]).sum();
                cov[(j, k)] = c;
                cov[(k, j)] = c;
            }
            let mut v = self.noise_vars[k];
            for &(i, a) in &pa {
                for &(i2, a2) in &pa {
                    v += a * a2 * cov[(i, i2)];
                }
            }
            cov[(k, k)] = v;
        }
        cov
    }

    /// Exact marginal means.
    pub fn means(&self) -> Vec<f64> {
        let mut mu = vec![0.0; self.p()];
        for &k in self.dag.topological_order().as_slice() {
            mu[k] = self.noise_means[k]
                + self
                    .dag
                    .parents(k)
                    .iter()
                    .map(|i| self.weights[&(i, k)] * mu[i])
                    .sum::<f64>();
        }
        mu
    }

    /// Exact `(mean, variance)` of every node.
    pub fn marginals(&self) -> Vec<(f64, f64)> {
        let cov = self.covariance();
        self.means()
            .into_iter()
            .enumerate()
            .map(|(k, m)| (m, cov[(k, k)]))
            .collect()
    }

    /// `n` i.i.d. rows by ancestral sampling. Zero-variance nodes are
    /// assigned deterministically.
    pub fn sample(&self, n: usize, seed: u64) -> DMatrix<f64> {
        let p = self.p();
        let order = self.dag.topological_order();
        let sd: Vec<f64> = self.noise_vars.iter().map(|v| v.sqrt()).collect();
        let parents: Vec<Vec<(usize, f64)>> = (0..p)
            .map(|k| {
                self.dag
                    .parents(k)
                    .iter()
                    .map(|i| (i, self.weights[&(i, k)]))
                    .collect()
            })
            .collect();
        let mut rng = derived_rng(seed, 0);
        let mut out = DMatrix::zeros(n, p);
        let mut row = vec![0.0; p];
        for r in 0..n {
            for &k in order.as_slice() {
                let mut x = self.noise_means[k];
                for &(i, a) in &parents[k] {
                    x += a * row[i];
                }
                if sd[k] > 0.0 {
                    let z: f64 = rng.sample(StandardNormal);
                    x += sd[k] * z;
                }
                row[k] = x;
            }
            for k in 0..p {
                out[(r, k)] = row[k];
            }
        }
        out
    }

    /// The interventional SEM. Non-target mechanisms are copied unchanged.
    pub fn apply_intervention(&self, interv: &Intervention) -> Result<LinearGaussianSem> {
        interv.validate(self.p())?;
        let mut weights = self.weights.clone();
        let mut vars = self.noise_vars.clone();
        let mut means = self.noise_means.clone();
        let mut cut = NodeSet::empty();
        for &(k, mech) in &interv.targets {
            match mech {
                Mechanism::Do(v) => {
                    cut.insert(k);
                    vars[k] = 0.0;
                    means[k] = v;
                }
                Mechanism::Shift(d) => means[k] += d,
                Mechanism::ScaleNoise(f) => vars[k] *= f,
            }
        }
        weights.retain(|&(_, j), _| !cut.contains(j));
        let dag = Dag::new(self.p(), weights.keys().copied())?;
        LinearGaussianSem::new(dag, weights, vars, means)
    }
}

/// How an intervention modifies the mechanism of one target node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mechanism {
    /// Cut incoming edges and fix the node at a value.
    Do(f64),
    /// Add a constant to the node's noise mean.
    Shift(f64),
    /// Multiply the node's noise variance by a positive factor.
    ScaleNoise(f64),
}

/// A set of targets with one mechanism each. No targets means the
/// observational regime.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Intervention {
    pub targets: Vec<(usize, Mechanism)>,
}

impl Intervention {
    pub fn observational() -> Self {
        Intervention::default()
    }

    pub fn single(node: usize, mech: Mechanism) -> Self {
        Intervention {
            targets: vec![(node, mech)],
        }
    }

    pub fn target_set(&self) -> NodeSet {
        self.targets.iter().map(|&(k, _)| k).collect()
    }

    pub fn is_observational(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn validate(&self, p: usize) -> Result<()> {
        let mut seen = NodeSet::empty();
        for &(k, mech) in &self.targets {
            if k >= p {
                return Err(Error::NodeOutOfRange { node: k, p });
            }
            if seen.contains(k) {
                return Err(Error::InvalidParameter(format!(
                    "node X{} targeted twice",
                    k + 1
                )));
            }
            seen.insert(k);
            match mech {
                Mechanism::ScaleNoise(f) if !(f > 0.0 && f.is_finite()) => {
                    return Err(Error::InvalidParameter(format!(
                        "noise scale factor must be positive, got {f}"
                    )))
                }
                Mechanism::Do(v) | Mechanism::Shift(v) if !v.is_finite() => {
                    return Err(Error::InvalidParameter("non-finite intervention value".into()))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// Uniform random topological order, then each of the `p(p-1)/2` forward
/// pairs is an edge independently with probability `density`.
pub fn random_dag(p: usize, density: f64, seed: u64) -> Result<Dag> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidParameter(format!(
            "density must lie in [0, 1], got {density}"
        )));
    }
    crate::graph::dag::check_p(p)?;
    let mut rng = derived_rng(seed, 0);
    let mut order: Vec<usize> = (0..p).collect();
    order.shuffle(&mut rng);
    let mut edges = Vec::new();
    for a in 0..p {
        for b in (a + 1)..p {
            if rng.random_bool(density) {
                edges.push((order[a], order[b]));
            }
        }
    }
    Dag::new(p, edges)
}

/// Weights uniform on `±[lo, hi]` with a random sign, unit noise variances,
/// zero noise means.
pub fn random_sem(dag: &Dag, weight_box: (f64, f64), seed: u64) -> Result<LinearGaussianSem> {
    let (lo, hi) = weight_box;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "weight box needs 0 < lo < hi, got [{lo}, {hi}]"
        )));
    }
    let mut rng = derived_rng(seed, 1);
    let weights = dag
        .edges()
        .into_iter()
        .map(|e| {
            let mag = rng.random_range(lo..=hi);
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            (e, sign * mag)
        })
        .collect();
    LinearGaussianSem::with_unit_noise(dag.clone(), weights)
}

/// A uniformly random permutation of `0..p`.
pub fn random_permutation(p: usize, seed: u64) -> Permutation {
    let mut rng = derived_rng(seed, 2);
    let mut order: Vec<usize> = (0..p).collect();
    order.shuffle(&mut rng);
    Permutation::new(order).expect("shuffle of 0..p")
}
