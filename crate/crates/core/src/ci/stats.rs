//! Gaussian CI statistics: partial correlations, the Fisher-z test, and
//! two-sample marginal invariance tests.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, FisherSnedecor, Normal};

use crate::error::{Error, Result};
use crate::graph::dsep::validate_query;
use crate::graph::NodeSet;

/// Relative pivot size below which a principal submatrix counts as singular.
const SINGULAR_PIVOT: f64 = 1e-12;

/// `ρ̂` is clamped to `(-1 + ε, 1 - ε)` before `atanh`.
const FISHER_CLAMP: f64 = 1e-12;

fn standard_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

/// Two-sided standard normal critical value `z_{1-α/2}`.
pub fn normal_critical_value(alpha: f64) -> f64 {
    standard_normal().inverse_cdf(1.0 - alpha / 2.0)
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

/// Partial correlation of `i` and `j` given `cond`, read off the inverse of
/// the principal submatrix on `{i, j} ∪ cond`.
pub fn partial_correlation(cov: &DMatrix<f64>, i: usize, j: usize, cond: NodeSet) -> Result<f64> {
    if !cov.is_square() {
        return Err(Error::Degenerate("covariance matrix is not square".into()));
    }
    validate_query(cov.nrows(), i, j, cond)?;
    let idx: Vec<usize> = [i, j].into_iter().chain(cond.iter()).collect();
    let k = idx.len();
    let sub = DMatrix::from_fn(k, k, |a, b| cov[(idx[a], idx[b])]);
    let chol = sub.clone().cholesky().ok_or_else(|| singular(&idx))?;
    let l = chol.l_dirty();
    for d in 0..k {
        let pivot = l[(d, d)] * l[(d, d)];
        if !(pivot > SINGULAR_PIVOT * sub[(d, d)].abs()) {
            return Err(singular(&idx));
        }
    }
    let prec = chol.inverse();
    let rho = -prec[(0, 1)] / (prec[(0, 0)] * prec[(1, 1)]).sqrt();
    Ok(rho.clamp(-1.0, 1.0))
}

fn singular(idx: &[usize]) -> Error {
    let labels: Vec<usize> = idx.iter().map(|v| v + 1).collect();
    Error::Degenerate(format!("singular covariance submatrix on nodes {labels:?}"))
}

/// `sqrt(n - |S| - 3) · atanh(ρ̂)`, with `ρ̂` clamped away from ±1.
pub fn fisher_z_statistic(rho: f64, n: usize, cond_size: usize) -> Result<f64> {
    if n <= cond_size + 3 {
        return Err(Error::Degenerate(format!(
            "need more than {} samples for a conditioning set of size {cond_size}, got {n}",
            cond_size + 3
        )));
    }
    let r = rho.clamp(-1.0 + FISHER_CLAMP, 1.0 - FISHER_CLAMP);
    Ok(((n - cond_size - 3) as f64).sqrt() * r.atanh())
}

/// Accepts independence iff `|z| ≤ z_{1-α/2}`.
pub fn fisher_z_accepts(rho: f64, n: usize, cond_size: usize, alpha: f64) -> Result<bool> {
    check_alpha(alpha)?;
    let z = fisher_z_statistic(rho, n, cond_size)?;
    Ok(z.abs() <= normal_critical_value(alpha))
}

/// Unbiased sample covariance of the columns of an `n × p` matrix.
pub fn sample_covariance(samples: &DMatrix<f64>) -> DMatrix<f64> {
    let n = samples.nrows();
    let means = samples.row_mean();
    let mut centered = samples.clone();
    for mut row in centered.row_iter_mut() {
        row -= &means;
    }
    let denom = (n.max(2) - 1) as f64;
    (centered.transpose() * &centered) / denom
}

/// Fisher-z test of `X_i ⫫ X_j | X_cond` on an `n × p` sample matrix.
/// Returns `true` for independence.
pub fn fisher_z_test(
    samples: &DMatrix<f64>,
    i: usize,
    j: usize,
    cond: NodeSet,
    alpha: f64,
) -> Result<bool> {
    check_alpha(alpha)?;
    validate_query(samples.ncols(), i, j, cond)?;
    let n = samples.nrows();
    if n <= cond.len() + 3 {
        return Err(Error::Degenerate(format!(
            "insufficient sample size {n} for conditioning set of size {}",
            cond.len()
        )));
    }
    let idx: Vec<usize> = [i, j].into_iter().chain(cond.iter()).collect();
    let sub = samples.select_columns(&idx);
    let cov = sample_covariance(&sub);
    for (k, &v) in idx.iter().enumerate() {
        if !(cov[(k, k)] > 0.0) {
            return Err(Error::Degenerate(format!("column X{} is constant", v + 1)));
        }
    }
    let local_cond: NodeSet = (2..idx.len()).collect();
    let rho = partial_correlation(&cov, 0, 1, local_cond)?;
    fisher_z_accepts(rho, n, cond.len(), alpha)
}

/// Outcome of comparing the marginal of one node between the observational
/// regime and one interventional regime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceResult {
    pub intervention: usize,
    pub node: usize,
    pub changed: bool,
    /// Two-sample mean z statistic (0 for the exact and degenerate paths).
    pub statistic: f64,
    /// Bonferroni-combined p-value of the mean and variance tests.
    pub p_value: f64,
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Two-sample test of `P(X_j) = P^I(X_j)`: a mean z-test and a variance
/// F-test, each at level `α/2`. If either sample has zero variance the two
/// sets are compared for exact equality of their (single) values instead.
pub fn marginal_invariance_test(
    intervention: usize,
    node: usize,
    obs: &[f64],
    intv: &[f64],
    alpha: f64,
) -> Result<InvarianceResult> {
    check_alpha(alpha)?;
    if obs.is_empty() || intv.is_empty() {
        return Err(Error::Degenerate("empty sample set".into()));
    }
    let (m1, v1) = mean_var(obs);
    let (m2, v2) = mean_var(intv);
    if v1 == 0.0 || v2 == 0.0 {
        let same = v1 == 0.0 && v2 == 0.0 && obs[0] == intv[0];
        return Ok(InvarianceResult {
            intervention,
            node,
            changed: !same,
            statistic: 0.0,
            p_value: if same { 1.0 } else { 0.0 },
        });
    }
    let (n1, n2) = (obs.len() as f64, intv.len() as f64);
    let z = (m1 - m2) / (v1 / n1 + v2 / n2).sqrt();
    let p_mean = 2.0 * standard_normal().sf(z.abs());
    let f = FisherSnedecor::new(n1 - 1.0, n2 - 1.0)
        .map_err(|e| Error::Degenerate(format!("F distribution: {e}")))?;
    let cdf = f.cdf(v1 / v2);
    let p_var = 2.0 * cdf.min(1.0 - cdf);
    let p_value = (2.0 * p_mean.min(p_var)).min(1.0);
    Ok(InvarianceResult {
        intervention,
        node,
        changed: p_value < alpha,
        statistic: z,
        p_value,
    })
}

/// Compares exact Gaussian marginals `(mean, variance)`; `changed` iff
/// either moment differs by more than `tol`.
pub fn exact_marginal_invariance(
    intervention: usize,
    node: usize,
    obs: (f64, f64),
    intv: (f64, f64),
    tol: f64,
) -> InvarianceResult {
    let changed = (obs.0 - intv.0).abs() > tol || (obs.1 - intv.1).abs() > tol;
    InvarianceResult {
        intervention,
        node,
        changed,
        statistic: 0.0,
        p_value: if changed { 0.0 } else { 1.0 },
    }
}
