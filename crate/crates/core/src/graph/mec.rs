//! Markov equivalence: the Verma–Pearl test, enumeration of a class by
//! covered-edge reversals, and clique statistics of essential graphs.

use std::collections::{HashSet, VecDeque};

use super::dag::Dag;
use super::nodeset::NodeSet;
use super::pdag::Pdag;
use crate::error::{Error, Result};

/// Default cap on `p` for [`enumerate_mec`].
pub const DEFAULT_MEC_GUARD: usize = 10;

/// Same skeleton and same unshielded colliders.
pub fn markov_equivalent(d1: &Dag, d2: &Dag) -> Result<bool> {
    if d1.p() != d2.p() {
        return Err(Error::SizeMismatch(d1.p(), d2.p()));
    }
    Ok(d1.skeleton() == d2.skeleton() && d1.v_structures() == d2.v_structures())
}

/// Every DAG Markov equivalent to `dag`, sorted by edge list.
///
/// Breadth-first closure under covered-edge reversals; any two members of a
/// class are connected by such a sequence, so the closure is the whole class.
pub fn enumerate_mec(dag: &Dag, guard: usize) -> Result<Vec<Dag>> {
    if dag.p() > guard {
        return Err(Error::GuardExceeded {
            what: "MEC enumeration",
            p: dag.p(),
            guard,
        });
    }
    let mut seen: HashSet<Vec<NodeSet>> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut out = Vec::new();
    seen.insert(dag.parent_sets().to_vec());
    queue.push_back(dag.clone());
    while let Some(g) = queue.pop_front() {
        for (i, j) in g.covered_edges() {
            let r = g.reverse_edge(i, j).expect("covered edge reversal is acyclic");
            if seen.insert(r.parent_sets().to_vec()) {
                queue.push_back(r);
            }
        }
        out.push(g);
    }
    out.sort_by_key(|g| g.edges());
    Ok(out)
}

/// Size of the largest clique made of undirected edges only (at least 1).
pub fn max_undirected_clique(pdag: &Pdag) -> usize {
    let adj: Vec<NodeSet> = (0..pdag.p()).map(|i| pdag.undirected_neighbors(i)).collect();
    let mut best = 1;
    bron_kerbosch(&adj, NodeSet::empty(), NodeSet::full(pdag.p()), NodeSet::empty(), &mut best);
    best
}

// Bron–Kerbosch with pivoting, pruned when the candidate pool cannot beat `best`.
fn bron_kerbosch(adj: &[NodeSet], r: NodeSet, mut p: NodeSet, mut x: NodeSet, best: &mut usize) {
    if p.is_empty() && x.is_empty() {
        *best = (*best).max(r.len());
        return;
    }
    if r.len() + p.len() <= *best {
        return;
    }
    let pivot = p
        .union(x)
        .iter()
        .max_by_key(|&u| adj[u].intersection(p).len())
        .expect("p ∪ x non-empty");
    for v in p.difference(adj[pivot]) {
        bron_kerbosch(adj, r.with(v), p.intersection(adj[v]), x.intersection(adj[v]), best);
        p.remove(v);
        x.insert(v);
    }
}
