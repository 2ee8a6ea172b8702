//! Meek orientation rules and essential graphs.
//!
//! The four rules, for an undirected edge `a - b`:
//!
//! 1. `c -> a`, `c` and `b` non-adjacent: orient `a -> b`.
//! 2. `a -> c -> b`: orient `a -> b`.
//! 3. `a - c -> b`, `a - d -> b`, `c` and `d` non-adjacent: orient `a -> b`.
//! 4. `c -> d -> b`, `a - d`, `a` adjacent to `c`, `c` and `b` non-adjacent:
//!    orient `a -> b`.

use super::dag::Dag;
use super::nodeset::NodeSet;
use super::pdag::Pdag;
use crate::error::{Error, Result};

/// What to do when an orientation would create a directed cycle or a new
/// unshielded collider.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConflictPolicy {
    /// Report the input as inconsistent.
    Strict,
    /// Leave the offending edge undirected and keep going. Used on
    /// finite-sample skeletons, where the input may not be extendable.
    Skip,
}

/// Applies Meek rules 1–4 until none fires.
pub fn meek_closure(pdag: &Pdag) -> Result<Pdag> {
    meek_closure_with(pdag, ConflictPolicy::Strict)
}

pub fn meek_closure_with(pdag: &Pdag, policy: ConflictPolicy) -> Result<Pdag> {
    if policy == ConflictPolicy::Strict && !pdag.directed_part_is_acyclic() {
        return Err(Error::Inconsistent("input has a directed cycle".into()));
    }
    let original_vs = pdag.v_structures();
    let mut g = pdag.clone();
    let mut skipped: Vec<(usize, usize)> = Vec::new();
    loop {
        let mut changed = false;
        for (x, y) in g.undirected_edges() {
            for (a, b) in [(x, y), (y, x)] {
                if !g.is_undirected(a, b) || skipped.contains(&(a, b)) {
                    continue;
                }
                if !rule_fires(&g, a, b) {
                    continue;
                }
                if let Some(reason) = orientation_conflict(&g, a, b) {
                    match policy {
                        ConflictPolicy::Strict => {
                            return Err(Error::Inconsistent(format!(
                                "orienting {} -> {} would create {reason}",
                                a + 1,
                                b + 1
                            )))
                        }
                        ConflictPolicy::Skip => {
                            skipped.push((a, b));
                            continue;
                        }
                    }
                }
                g.orient(a, b);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if policy == ConflictPolicy::Strict {
        if let Some(v) = g
            .v_structures()
            .into_iter()
            .find(|v| !original_vs.contains(v))
        {
            return Err(Error::Inconsistent(format!(
                "closure introduced collider {} -> {} <- {}",
                v.0 + 1,
                v.1 + 1,
                v.2 + 1
            )));
        }
    }
    Ok(g)
}

fn rule_fires(g: &Pdag, a: usize, b: usize) -> bool {
    let adj_b = g.neighbors(b);
    // Rule 1
    if !g.parents(a).difference(adj_b).without(b).is_empty() {
        return true;
    }
    // Rule 2
    if !g.children(a).intersection(g.parents(b)).is_empty() {
        return true;
    }
    // Rule 3
    let und_a = g.undirected_neighbors(a);
    let cands: Vec<usize> = und_a.intersection(g.parents(b)).to_vec();
    for (k, &c) in cands.iter().enumerate() {
        if cands[k + 1..].iter().any(|&d| !g.adjacent(c, d)) {
            return true;
        }
    }
    // Rule 4
    for d in und_a.intersection(g.parents(b)) {
        for c in g.parents(d) {
            if c != a && g.adjacent(a, c) && !adj_b.contains(c) && c != b {
                return true;
            }
        }
    }
    false
}

fn orientation_conflict(g: &Pdag, a: usize, b: usize) -> Option<&'static str> {
    if g.has_directed_path(b, a) {
        return Some("a directed cycle");
    }
    let new_colliders = g
        .parents(b)
        .iter()
        .any(|c| c != a && !g.adjacent(a, c));
    if new_colliders {
        return Some("a new unshielded collider");
    }
    None
}

/// Skeleton, unshielded colliders, then Meek closure: the CPDAG of the
/// Markov equivalence class of `dag`.
pub fn essential_graph(dag: &Dag) -> Pdag {
    let mut g = dag.skeleton();
    for (i, k, j) in dag.v_structures() {
        if g.is_undirected(i, k) {
            g.orient(i, k);
        }
        if g.is_undirected(j, k) {
            g.orient(j, k);
        }
    }
    meek_closure(&g).expect("orientations from a DAG are consistent")
}

/// Orients, on a skeleton, every unshielded triple `i - k - j` whose middle
/// node is not in the separating set of `(i, j)`, then applies Meek closure.
/// `sepset(i, j)` returns `None` when `i` and `j` were never separated.
///
/// An edge claimed in both directions by different triples stays undirected.
pub fn orient_from_sepsets(
    skeleton: &Pdag,
    sepset: impl Fn(usize, usize) -> Option<NodeSet>,
    policy: ConflictPolicy,
) -> Result<Pdag> {
    let p = skeleton.p();
    let mut claims: Vec<(usize, usize)> = Vec::new();
    for k in 0..p {
        let nb = skeleton.neighbors(k).to_vec();
        for (x, &i) in nb.iter().enumerate() {
            for &j in &nb[x + 1..] {
                if skeleton.adjacent(i, j) {
                    continue;
                }
                if let Some(s) = sepset(i, j) {
                    if !s.contains(k) {
                        claims.push((i, k));
                        claims.push((j, k));
                    }
                }
            }
        }
    }
    let mut g = skeleton.clone();
    for &(a, b) in &claims {
        if claims.contains(&(b, a)) {
            if policy == ConflictPolicy::Strict {
                return Err(Error::Inconsistent(format!(
                    "colliders claim both {} -> {} and {} -> {}",
                    a + 1,
                    b + 1,
                    b + 1,
                    a + 1
                )));
            }
            continue;
        }
        if g.is_undirected(a, b) {
            g.orient(a, b);
        }
    }
    if policy == ConflictPolicy::Skip && !g.directed_part_is_acyclic() {
        // Colliders alone produced a cycle; fall back to the bare skeleton
        // rather than emit a cyclic graph.
        return Ok(skeleton.clone());
    }
    meek_closure_with(&g, policy)
}
