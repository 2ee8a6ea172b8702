use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sem::derived_rng;

/// Thresholds reported by default.
pub const DEFAULT_LAMBDA_GRID: [f64; 6] = [0.0, 0.001, 0.01, 0.05, 0.1, 0.2];

/// Draws per parallel work unit; unit `c` uses RNG stream `c`.
const CHUNK: usize = 1 << 14;

/// Fraction of weight draws whose distribution violates λ-strong
/// faithfulness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub lambda: f64,
    pub draws: u64,
    pub violating: u64,
    /// `violating / draws`.
    pub fraction: f64,
    #[serde(rename = "box")]
    pub weight_box: (f64, f64),
    pub seed: u64,
}

/// The six partial correlations of the fully connected three-node SEM
/// `X1 = e1`, `X2 = a12 X1 + e2`, `X3 = a13 X1 + a23 X2 + e3` with
/// standard-normal noise, from its exact covariance:
/// `[ρ12, ρ13, ρ23, ρ12·3, ρ13·2, ρ23·1]`.
pub fn three_node_partial_correlations(a12: f64, a13: f64, a23: f64) -> [f64; 6] {
    let v1 = 1.0;
    let v2 = a12 * a12 + 1.0;
    let c12 = a12;
    let c13 = a13 + a23 * a12;
    let c23 = a13 * a12 + a23 * v2;
    let v3 = a13 * a13 + a23 * a23 * v2 + 2.0 * a13 * a23 * a12 + 1.0;
    let r12 = c12 / (v1 * v2).sqrt();
    let r13 = c13 / (v1 * v3).sqrt();
    let r23 = c23 / (v2 * v3).sqrt();
    let given = |rij: f64, rik: f64, rjk: f64| {
        (rij - rik * rjk) / ((1.0 - rik * rik) * (1.0 - rjk * rjk)).sqrt()
    };
    [
        r12,
        r13,
        r23,
        given(r12, r13, r23),
        given(r13, r12, r23),
        given(r23, r12, r13),
    ]
}

fn min_abs_partial_correlation(a12: f64, a13: f64, a23: f64) -> f64 {
    three_node_partial_correlations(a12, a13, a23)
        .iter()
        .fold(f64::INFINITY, |m, r| m.min(r.abs()))
}

fn check_inputs(n_draws: u64, weight_box: (f64, f64)) -> Result<()> {
    let (lo, hi) = weight_box;
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::InvalidParameter(format!(
            "empty weight box [{lo}, {hi}]"
        )));
    }
    if n_draws == 0 {
        return Err(Error::InvalidParameter("at least one draw is required".into()));
    }
    Ok(())
}

/// Monte-Carlo estimate of the volume of `(a12, a13, a23) ∈ box³` where the
/// smallest absolute partial correlation is at most `λ`.
pub fn unfaithful_volume(
    lambda: f64,
    n_draws: u64,
    weight_box: (f64, f64),
    seed: u64,
) -> Result<VolumeEstimate> {
    Ok(unfaithful_volume_grid(&[lambda], n_draws, weight_box, seed)?.remove(0))
}

/// [`unfaithful_volume`] for several thresholds over the same draws.
pub fn unfaithful_volume_grid(
    lambdas: &[f64],
    n_draws: u64,
    weight_box: (f64, f64),
    seed: u64,
) -> Result<Vec<VolumeEstimate>> {
    check_inputs(n_draws, weight_box)?;
    if let Some(&bad) = lambdas.iter().find(|l| !(0.0..=1.0).contains(*l)) {
        return Err(Error::InvalidParameter(format!("λ must lie in [0, 1], got {bad}")));
    }
    let (lo, hi) = weight_box;
    let n_chunks = n_draws.div_ceil(CHUNK as u64);
    let counts = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = derived_rng(seed, c);
            let len = (n_draws - c * CHUNK as u64).min(CHUNK as u64);
            let mut counts = vec![0u64; lambdas.len()];
            for _ in 0..len {
                let a12 = rng.random_range(lo..=hi);
                let a13 = rng.random_range(lo..=hi);
                let a23 = rng.random_range(lo..=hi);
                let m = min_abs_partial_correlation(a12, a13, a23);
                for (count, &l) in counts.iter_mut().zip(lambdas) {
                    if m <= l {
                        *count += 1;
                    }
                }
            }
            counts
        })
        .reduce(
            || vec![0u64; lambdas.len()],
            |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect(),
        );
    Ok(lambdas
        .iter()
        .zip(counts)
        .map(|(&lambda, violating)| VolumeEstimate {
            lambda,
            draws: n_draws,
            violating,
            fraction: violating as f64 / n_draws as f64,
            weight_box,
            seed,
        })
        .collect())
}
