use std::collections::{BTreeMap, HashSet};

use serde_json::json;

use super::{minimal_imap, run_with_accounting, Algorithm, DiscoveryReport, RunOutput};
use crate::ci::CiProvider;
use crate::error::{Error, Result};
use crate::graph::{essential_graph, Dag, NodeSet, Permutation};
use crate::sem::{derived_rng, random_permutation};
use rand::seq::SliceRandom;

/// Default maximum number of consecutive covered-edge reversals per search.
pub const DEFAULT_GSP_DEPTH: usize = 4;

/// Default number of searches from independent initial permutations.
pub const DEFAULT_GSP_RESTARTS: usize = 8;

#[derive(Debug, Clone)]
pub struct GspConfig {
    /// Maximum number of consecutive covered-edge reversals explored from
    /// the current minimal I-MAP. The search never leaves the current
    /// equivalence class, so `usize::MAX` explores the whole class and
    /// always terminates.
    pub depth: usize,
    /// Number of searches, each from its own initial permutation; the
    /// sparsest result wins, ties going to the earlier search. With finite
    /// samples a search can stop at a dense I-MAP without covered edges.
    pub restarts: usize,
    /// Seeds the initial permutations.
    pub seed: u64,
    /// Initial permutation of the first search; later ones are random.
    pub initial: Option<Permutation>,
}

impl Default for GspConfig {
    fn default() -> Self {
        GspConfig {
            depth: DEFAULT_GSP_DEPTH,
            restarts: DEFAULT_GSP_RESTARTS,
            seed: 0,
            initial: None,
        }
    }
}

/// Greedy sparsest permutation.
///
/// Starting from the minimal I-MAP of the initial permutation, a depth-first
/// search reverses covered edges, recomputing the minimal I-MAP for a
/// permutation consistent with each reversed DAG. Equal-size I-MAPs are
/// explored further (up to `depth` reversals); the first strictly sparser
/// one restarts the search. The essential graph of the final DAG is
/// returned. `converged` is `false` if the last search was cut off by the
/// depth limit. With `restarts > 1` the search is repeated from further
/// random permutations and the sparsest final DAG is kept.
pub fn gsp(provider: &CiProvider, config: &GspConfig) -> Result<DiscoveryReport> {
    if config.depth == 0 {
        return Err(Error::InvalidParameter("GSP depth must be at least 1".into()));
    }
    if config.restarts == 0 {
        return Err(Error::InvalidParameter("GSP needs at least one search".into()));
    }
    let p = provider.p();
    let first = match &config.initial {
        Some(perm) if perm.len() != p => return Err(Error::SizeMismatch(perm.len(), p)),
        Some(perm) => perm.clone(),
        None => random_permutation(p, config.seed),
    };
    let initials: Vec<Permutation> = std::iter::once(first)
        .chain((1..config.restarts as u64).map(|r| restart_permutation(p, config.seed, r)))
        .collect();
    let mut echo = BTreeMap::new();
    echo.insert("ci".into(), json!(provider.describe()));
    echo.insert("depth".into(), json!(config.depth));
    echo.insert("restarts".into(), json!(config.restarts));
    echo.insert("seed".into(), json!(config.seed));
    echo.insert(
        "initial".into(),
        json!(initials
            .iter()
            .map(|perm| perm.as_slice().iter().map(|v| v + 1).collect::<Vec<_>>())
            .collect::<Vec<_>>()),
    );
    run_with_accounting(Algorithm::Gsp, provider, echo, || {
        let mut best: Option<(Dag, bool)> = None;
        for initial in &initials {
            let (dag, converged) = search_from(provider, initial, config.depth)?;
            if best.as_ref().is_none_or(|(b, _)| dag.n_edges() < b.n_edges()) {
                best = Some((dag, converged));
            }
        }
        let (dag, converged) = best.expect("at least one search");
        Ok(RunOutput {
            output: essential_graph(&dag),
            converged,
            prefix_sets: None,
        })
    })
}

/// Initial permutation of search `r >= 1`.
fn restart_permutation(p: usize, seed: u64, r: u64) -> Permutation {
    let mut order: Vec<usize> = (0..p).collect();
    order.shuffle(&mut derived_rng(seed, RESTART_STREAM + r));
    Permutation::new(order).expect("shuffle of 0..p")
}

/// RNG streams below this are used elsewhere for the same seed.
const RESTART_STREAM: u64 = 1 << 32;

/// One greedy search; returns the final DAG and whether it was not cut off.
fn search_from(provider: &CiProvider, initial: &Permutation, depth: usize) -> Result<(Dag, bool)> {
    let mut current = (minimal_imap(provider, initial)?, initial.clone());
    loop {
        let mut visited = HashSet::new();
        visited.insert(current.0.parent_sets().to_vec());
        let mut search = Search {
            provider,
            target: current.0.n_edges(),
            visited,
            truncated: false,
        };
        match search.dfs(&current.0, &current.1, depth)? {
            Some(sparser) => current = sparser,
            None => return Ok((current.0, !search.truncated)),
        }
    }
}

struct Search<'a> {
    provider: &'a CiProvider,
    target: usize,
    visited: HashSet<Vec<NodeSet>>,
    truncated: bool,
}

impl Search<'_> {
    /// Depth-first over covered-edge reversals; each stack frame holds a DAG,
    /// the permutation it is the minimal I-MAP of, `depth_left`, and the
    /// covered edges not yet tried from it.
    fn dfs(&mut self, root: &Dag, order: &Permutation, depth: usize) -> Result<Option<(Dag, Permutation)>> {
        let mut stack = vec![(root.covered_edges().into_iter(), root.clone(), order.clone(), depth)];
        while let Some((edges, g, order, depth_left)) = stack.last_mut() {
            let Some((i, j)) = edges.next() else {
                stack.pop();
                continue;
            };
            let depth_left = *depth_left;
            let flipped = g.reverse_edge(i, j)?;
            if !self.visited.insert(flipped.parent_sets().to_vec()) {
                continue;
            }
            let next = transpose_covered(g, order, i, j)?;
            let imap = minimal_imap(self.provider, &next)?;
            if imap.n_edges() < self.target {
                return Ok(Some((imap, next)));
            }
            if imap.n_edges() == self.target {
                if depth_left > 1 {
                    stack.push((imap.covered_edges().into_iter(), imap, next, depth_left - 1));
                } else {
                    self.truncated = true;
                }
            }
        }
        Ok(None)
    }
}

/// The linear extension of `g` with `i -> j` reversed that stays closest to
/// `order`: nodes strictly between `i` and `j` that are ancestors of `j` move
/// in front of `i`, the rest move behind `j`, then `i` and `j` swap. Only the
/// predecessor sets of `i`, `j` and the moved nodes change.
fn transpose_covered(g: &Dag, order: &Permutation, i: usize, j: usize) -> Result<Permutation> {
    let v = order.as_slice();
    let (a, b) = (v.iter().position(|&x| x == i), v.iter().position(|&x| x == j));
    let (Some(a), Some(b)) = (a, b) else {
        return Err(Error::InvalidParameter("edge endpoints missing from order".into()));
    };
    let anc = g.ancestors(j);
    let between = &v[a + 1..b];
    let mut out = v[..a].to_vec();
    out.extend(between.iter().filter(|&&x| anc.contains(x)));
    out.extend([j, i]);
    out.extend(between.iter().filter(|&&x| !anc.contains(x)));
    out.extend(&v[b + 1..]);
    Permutation::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_start_reduces_to_collider() {
        let g = Dag::from_labels(3, &[(1, 3), (2, 3)]).unwrap();
        let cfg = GspConfig {
            initial: Some(Permutation::from_labels(&[3, 1, 2]).unwrap()),
            ..GspConfig::default()
        };
        let r = gsp(&CiProvider::oracle(g.clone()), &cfg).unwrap();
        assert_eq!(r.output, essential_graph(&g));
        assert!(r.converged);
    }

    #[test]
    fn consistent_start_is_already_sparsest() {
        let g = Dag::from_labels(4, &[(1, 2), (2, 3), (1, 4), (3, 4)]).unwrap();
        let cfg = GspConfig {
            initial: Some(Permutation::from_labels(&[1, 2, 3, 4]).unwrap()),
            ..GspConfig::default()
        };
        let prov = CiProvider::oracle(g.clone());
        let start = minimal_imap(&prov, cfg.initial.as_ref().unwrap()).unwrap();
        assert_eq!(start, g);
        let r = gsp(&prov, &cfg).unwrap();
        assert_eq!(r.output, essential_graph(&g));
    }

    #[test]
    fn restarts_are_seeded_and_echoed() {
        let g = Dag::from_labels(5, &[(1, 2), (2, 3), (1, 4), (3, 5), (4, 5)]).unwrap();
        let prov = CiProvider::oracle(g.clone());
        let cfg = GspConfig {
            restarts: 3,
            seed: 11,
            ..GspConfig::default()
        };
        let a = gsp(&prov, &cfg).unwrap();
        let b = gsp(&CiProvider::oracle(g.clone()), &cfg).unwrap();
        assert_eq!(a.output, essential_graph(&g));
        assert_eq!(a.config, b.config);
        let initials = a.config["initial"].as_array().unwrap();
        assert_eq!(initials.len(), 3);
        assert_ne!(initials[1], initials[2]);
    }

    #[test]
    fn transposition_keeps_order_and_swaps_endpoints() {
        // 1 -> 3 covered (Pa(3) = {1}); 2 sits between them and is not an
        // ancestor of 3, so it moves behind.
        let g = Dag::from_labels(3, &[(1, 3)]).unwrap();
        let order = Permutation::from_labels(&[1, 2, 3]).unwrap();
        let next = transpose_covered(&g, &order, 0, 2).unwrap();
        assert_eq!(next, Permutation::from_labels(&[3, 1, 2]).unwrap());
    }

    #[test]
    fn rejects_zero_restarts() {
        let prov = CiProvider::oracle(Dag::empty(3).unwrap());
        let cfg = GspConfig {
            restarts: 0,
            ..GspConfig::default()
        };
        assert!(gsp(&prov, &cfg).is_err());
    }

    #[test]
    fn rejects_zero_depth() {
        let prov = CiProvider::oracle(Dag::empty(3).unwrap());
        let cfg = GspConfig {
            depth: 0,
            ..GspConfig::default()
        };
        assert!(gsp(&prov, &cfg).is_err());
    }
}
