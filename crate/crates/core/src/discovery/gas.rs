//! Greedy ancestral search.
//!
//! GAS learns an ordering of the nodes by growing prefix sets (sets closed
//! under taking ancestors) `∅ = S_0 ⊆ S_1 ⊆ … ⊆ S_L = [p]`. A candidate `k`
//! outside the current prefix `S` is admitted unless a CI certificate shows
//! that `k` has an ancestor outside `S`. Candidates are scanned in ascending
//! order; within one pass a candidate must be certificate-free both for the
//! prefix at the start of the pass and for the prefix grown so far. Two certificate families are used,
//! both derived from the orientation steps of PC:
//!
//! * collider certificate: for `i ∉ S`, any `j`, and `Z = (S \ {j}) ∪ T`
//!   with `T ⊆ [p] \ (S ∪ {i, j, k})`: `i ⫫ j | Z` but `i ⫫̸ j | Z ∪ {k}`.
//!   Conditioning on `k` opens a collider that is `k` or an ancestor of `k`,
//!   and the collider's neighbour on the `i` side lies outside `S`.
//! * propagation certificate: for `i ∈ S`: `i ⫫̸ k | S \ {i}` but
//!   `i ⫫ k | (S \ {i}) ∪ J` for some non-empty `J ⊆ [p] \ (S ∪ {k})`. Every
//!   blocked path from `i` runs through a node of `J` that is an ancestor of
//!   `k`. `J` is tried in order of increasing size.
//!
//! Once the order is complete, one query per pair yields the minimal I-MAP
//! for that order, and its essential graph is returned.

use std::collections::BTreeMap;

use serde_json::json;

use super::{minimal_imap, run_with_accounting, Algorithm, DiscoveryReport, RunOutput};
use crate::ci::CiProvider;
use crate::error::{Error, Result};
use crate::graph::nodeset::subsets_of_size;
use crate::graph::{essential_graph, NodeSet, Permutation};

#[derive(Debug, Clone, Default)]
pub struct GasConfig {
    /// Cap on `|T|` in collider certificates; `None` allows every size.
    pub max_extra_conditioning: Option<usize>,
}

pub fn gas(provider: &CiProvider, config: &GasConfig) -> Result<DiscoveryReport> {
    let mut echo = BTreeMap::new();
    echo.insert("ci".into(), json!(provider.describe()));
    echo.insert(
        "max_extra_conditioning".into(),
        json!(config.max_extra_conditioning),
    );
    run_with_accounting(Algorithm::Gas, provider, echo, || {
        let (order, prefix_sets) = learn_order(provider, config)?;
        let dag = minimal_imap(provider, &order)?;
        Ok(RunOutput {
            output: essential_graph(&dag),
            converged: true,
            prefix_sets: Some(prefix_sets),
        })
    })
}

fn learn_order(provider: &CiProvider, config: &GasConfig) -> Result<(Permutation, Vec<NodeSet>)> {
    let p = provider.p();
    let all = NodeSet::full(p);
    let mut prefix = NodeSet::empty();
    let mut order = Vec::with_capacity(p);
    let mut prefix_sets = vec![prefix];
    while prefix != all {
        let start = prefix;
        let mut admitted = false;
        for k in all.difference(start) {
            if has_outside_ancestor(provider, start, k, config)? {
                continue;
            }
            if prefix == start || !has_outside_ancestor(provider, prefix, k, config)? {
                prefix.insert(k);
                order.push(k);
                admitted = true;
            }
        }
        if !admitted {
            return Err(Error::GasStuck {
                prefix: prefix.iter().map(|v| v + 1).collect(),
                remaining: all.difference(prefix).iter().map(|v| v + 1).collect(),
            });
        }
        prefix_sets.push(prefix);
    }
    Ok((Permutation::new(order)?, prefix_sets))
}

/// True if some certificate shows `k` has an ancestor outside `prefix`.
fn has_outside_ancestor(
    provider: &CiProvider,
    prefix: NodeSet,
    k: usize,
    config: &GasConfig,
) -> Result<bool> {
    let p = provider.p();
    let outside = NodeSet::full(p).difference(prefix).without(k);

    for i in prefix {
        let base = prefix.without(i);
        if provider.query(i, k, base)? {
            continue;
        }
        for size in 1..=outside.len() {
            for j in subsets_of_size(outside, size) {
                if provider.query(i, k, base.union(j))? {
                    return Ok(true);
                }
            }
        }
    }

    let max_t = config
        .max_extra_conditioning
        .unwrap_or(p)
        .min(outside.len().saturating_sub(1));
    for t in 0..=max_t {
        for i in outside {
            for j in NodeSet::full(p).without(i).without(k) {
                if outside.contains(j) && j < i {
                    continue;
                }
                let base = prefix.without(j);
                let free = outside.without(i).without(j);
                if free.len() < t {
                    continue;
                }
                for extra in subsets_of_size(free, t) {
                    let z = base.union(extra);
                    if provider.query(i, j, z)? && provider.dependent(i, j, z.with(k))? {
                        return Ok(true);
                    }
                }
            }
        }
    }
    Ok(false)
}
