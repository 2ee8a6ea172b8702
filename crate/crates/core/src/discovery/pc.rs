use std::collections::{BTreeMap, HashMap};

use serde_json::json;

use super::{run_with_accounting, Algorithm, DiscoveryReport, RunOutput};
use crate::ci::CiProvider;
use crate::error::Result;
use crate::graph::meek::{orient_from_sepsets, ConflictPolicy};
use crate::graph::nodeset::subsets_of_size;
use crate::graph::{NodeSet, Pdag};

#[derive(Debug, Clone, Default)]
pub struct PcConfig {
    /// Largest conditioning-set size to try; `None` runs to exhaustion.
    pub max_depth: Option<usize>,
}

/// The PC algorithm.
///
/// Adjacency search: for sizes `ℓ = 0, 1, …`, every still-adjacent pair
/// `(i, j)` (lexicographic) is tested against the size-`ℓ` subsets of
/// `adj(i) \ {j}` and then of `adj(j) \ {i}`, each in lexicographic order.
/// The first independence removes the edge and records its separating set.
/// Unshielded triples whose middle node is outside the separating set become
/// colliders; conflicting collider claims leave the edge undirected. Meek
/// closure finishes the orientation.
pub fn pc(provider: &CiProvider, config: &PcConfig) -> Result<DiscoveryReport> {
    let mut echo = BTreeMap::new();
    echo.insert("ci".into(), json!(provider.describe()));
    echo.insert("max_depth".into(), json!(config.max_depth));
    run_with_accounting(Algorithm::Pc, provider, echo, || {
        let (skeleton, sepsets) = adjacency_search(provider, config.max_depth)?;
        let sep = |i: usize, j: usize| sepsets.get(&(i.min(j), i.max(j))).copied();
        let out = orient_from_sepsets(&skeleton, sep, ConflictPolicy::Skip)?;
        Ok(RunOutput::done(out))
    })
}

type Sepsets = HashMap<(usize, usize), NodeSet>;

pub(crate) fn adjacency_search(
    provider: &CiProvider,
    max_depth: Option<usize>,
) -> Result<(Pdag, Sepsets)> {
    let p = provider.p();
    let mut adj: Vec<NodeSet> = (0..p).map(|i| NodeSet::full(p).without(i)).collect();
    let mut sepsets = HashMap::new();
    let mut level = 0;
    loop {
        let mut testable = false;
        for i in 0..p {
            for j in (i + 1)..p {
                if !adj[i].contains(j) {
                    continue;
                }
                let from_i = adj[i].without(j);
                let from_j = adj[j].without(i);
                if from_i.len() < level && from_j.len() < level {
                    continue;
                }
                testable = true;
                if let Some(s) = find_separator(provider, i, j, from_i, from_j, level)? {
                    adj[i].remove(j);
                    adj[j].remove(i);
                    sepsets.insert((i, j), s);
                }
            }
        }
        if !testable || max_depth.is_some_and(|d| level >= d) {
            break;
        }
        level += 1;
    }
    let mut skeleton = Pdag::empty(p)?;
    for i in 0..p {
        for j in adj[i].iter().filter(|&j| j > i) {
            skeleton.insert_undirected(i, j);
        }
    }
    Ok((skeleton, sepsets))
}

fn find_separator(
    provider: &CiProvider,
    i: usize,
    j: usize,
    from_i: NodeSet,
    from_j: NodeSet,
    level: usize,
) -> Result<Option<NodeSet>> {
    if from_i.len() >= level {
        for s in subsets_of_size(from_i, level) {
            if provider.query(i, j, s)? {
                return Ok(Some(s));
            }
        }
    }
    if from_j.len() >= level {
        for s in subsets_of_size(from_j, level) {
            if from_i.len() >= level && s.is_subset(from_i) {
                continue;
            }
            if provider.query(i, j, s)? {
                return Ok(Some(s));
            }
        }
    }
    Ok(None)
}
