//! Directed acyclic graphs over nodes `0..p`.
//!
//! Node indices are zero-based in the library API. The JSON and CSV formats
//! (see [`crate::io`]) and [`Dag::from_labels`] use one-based labels.

use super::nodeset::{NodeSet, MAX_NODES};
use super::pdag::Pdag;
use super::permutation::Permutation;
use crate::error::{Error, Result};

/// Which relatives of a node to collect.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Parents,
    Children,
    Ancestors,
    Descendants,
}

/// A directed acyclic graph. Immutable once built; acyclicity is checked at
/// construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dag {
    p: usize,
    parents: Vec<NodeSet>,
    children: Vec<NodeSet>,
}

pub(crate) fn check_p(p: usize) -> Result<()> {
    if p == 0 {
        return Err(Error::InvalidGraph("graph must have at least one node".into()));
    }
    if p > MAX_NODES {
        return Err(Error::TooManyNodes { p, max: MAX_NODES });
    }
    Ok(())
}

pub(crate) fn check_node(i: usize, p: usize) -> Result<()> {
    if i >= p {
        Err(Error::NodeOutOfRange { node: i, p })
    } else {
        Ok(())
    }
}

impl Dag {
    /// Builds a DAG from zero-based edges `(i, j)` meaning `i -> j`.
    pub fn new(p: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        check_p(p)?;
        let mut parents = vec![NodeSet::empty(); p];
        let mut children = vec![NodeSet::empty(); p];
        for (i, j) in edges {
            check_node(i, p)?;
            check_node(j, p)?;
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop at node {}", i + 1)));
            }
            if children[i].contains(j) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge {} -> {}",
                    i + 1,
                    j + 1
                )));
            }
            if children[j].contains(i) {
                return Err(Error::InvalidGraph(format!(
                    "both {} -> {} and {} -> {} present",
                    i + 1,
                    j + 1,
                    j + 1,
                    i + 1
                )));
            }
            children[i].insert(j);
            parents[j].insert(i);
        }
        let dag = Dag {
            p,
            parents,
            children,
        };
        if dag.try_topological_order().is_none() {
            return Err(Error::InvalidGraph("directed cycle".into()));
        }
        Ok(dag)
    }

    /// Builds a DAG from one-based edge labels, e.g. `&[(1, 3), (2, 3)]`.
    pub fn from_labels(p: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut zero = Vec::with_capacity(edges.len());
        for &(i, j) in edges {
            if i == 0 || j == 0 {
                return Err(Error::NodeOutOfRange { node: 0, p });
            }
            zero.push((i - 1, j - 1));
        }
        Dag::new(p, zero)
    }

    pub fn empty(p: usize) -> Result<Self> {
        Dag::new(p, std::iter::empty())
    }

    /// The complete DAG whose topological order is `order`.
    pub fn complete(order: &Permutation) -> Self {
        let o = order.as_slice();
        let edges = (0..o.len()).flat_map(|a| ((a + 1)..o.len()).map(move |b| (o[a], o[b])));
        Dag::new(o.len(), edges).expect("edges follow a permutation")
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n_edges(&self) -> usize {
        self.parents.iter().map(|s| s.len()).sum()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.p)
            .flat_map(|i| self.children[i].iter().map(move |j| (i, j)))
            .collect()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.children[i].contains(j)
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.children[i].contains(j) || self.parents[i].contains(j)
    }

    pub fn parents(&self, i: usize) -> NodeSet {
        self.parents[i]
    }

    pub fn children(&self, i: usize) -> NodeSet {
        self.children[i]
    }

    pub fn parent_sets(&self) -> &[NodeSet] {
        &self.parents
    }

    pub fn neighbors(&self, i: usize) -> NodeSet {
        self.parents[i].union(self.children[i])
    }

    /// Proper ancestors of `i` (excluding `i`).
    pub fn ancestors(&self, i: usize) -> NodeSet {
        self.closure(NodeSet::singleton(i), &self.parents).without(i)
    }

    /// Proper descendants of `i` (excluding `i`).
    pub fn descendants(&self, i: usize) -> NodeSet {
        self.closure(NodeSet::singleton(i), &self.children).without(i)
    }

    /// `set` together with all its ancestors.
    pub fn ancestral_closure(&self, set: NodeSet) -> NodeSet {
        self.closure(set, &self.parents)
    }

    fn closure(&self, start: NodeSet, step: &[NodeSet]) -> NodeSet {
        let mut seen = start;
        let mut frontier = start;
        while let Some(v) = frontier.first() {
            frontier.remove(v);
            let new = step[v].difference(seen);
            seen = seen.union(new);
            frontier = frontier.union(new);
        }
        seen
    }

    pub fn relatives(&self, i: usize, kind: Relation) -> Result<NodeSet> {
        check_node(i, self.p)?;
        Ok(match kind {
            Relation::Parents => self.parents(i),
            Relation::Children => self.children(i),
            Relation::Ancestors => self.ancestors(i),
            Relation::Descendants => self.descendants(i),
        })
    }

    fn try_topological_order(&self) -> Option<Vec<usize>> {
        // Kahn's algorithm, smallest available node first.
        let mut indeg: Vec<usize> = self.parents.iter().map(|s| s.len()).collect();
        let mut ready: NodeSet = (0..self.p).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(self.p);
        while let Some(v) = ready.first() {
            ready.remove(v);
            order.push(v);
            for c in self.children[v] {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    ready.insert(c);
                }
            }
        }
        (order.len() == self.p).then_some(order)
    }

    /// The lexicographically smallest topological order.
    pub fn topological_order(&self) -> Permutation {
        let order = self.try_topological_order().expect("Dag is acyclic");
        Permutation::new(order).expect("topological order is a permutation")
    }

    /// Undirected copy of every adjacency.
    pub fn skeleton(&self) -> Pdag {
        let mut g = Pdag::empty(self.p).expect("p already validated");
        for (i, j) in self.edges() {
            g.insert_undirected(i, j);
        }
        g
    }

    /// All `(i, k, j)` with `i -> k <- j`, `i < j` and `i`, `j` non-adjacent,
    /// sorted.
    pub fn v_structures(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for k in 0..self.p {
            let pa = self.parents[k].to_vec();
            for (a, &i) in pa.iter().enumerate() {
                for &j in &pa[a + 1..] {
                    if !self.adjacent(i, j) {
                        out.push((i, k, j));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Edge `i -> j` for every pair with `i` an ancestor of `j`.
    pub fn transitive_closure(&self) -> Dag {
        let edges: Vec<_> = (0..self.p)
            .flat_map(|i| self.descendants(i).iter().map(move |j| (i, j)))
            .collect();
        Dag::new(self.p, edges).expect("closure of a DAG is acyclic")
    }

    /// True iff every edge points forward in `perm`.
    pub fn is_consistent_order(&self, perm: &Permutation) -> Result<bool> {
        if perm.len() != self.p {
            return Err(Error::SizeMismatch(perm.len(), self.p));
        }
        let pos = perm.positions();
        Ok(self.edges().into_iter().all(|(i, j)| pos[i] < pos[j]))
    }

    /// All edges `i -> j` with `Pa(j) = Pa(i) ∪ {i}`.
    pub fn covered_edges(&self) -> Vec<(usize, usize)> {
        self.edges()
            .into_iter()
            .filter(|&(i, j)| self.is_covered(i, j))
            .collect()
    }

    pub fn is_covered(&self, i: usize, j: usize) -> bool {
        self.has_edge(i, j) && self.parents[j] == self.parents[i].with(i)
    }

    /// The graph with `i -> j` replaced by `j -> i`. Fails if the edge is
    /// missing or the reversal creates a cycle.
    pub fn reverse_edge(&self, i: usize, j: usize) -> Result<Dag> {
        if !self.has_edge(i, j) {
            return Err(Error::InvalidGraph(format!(
                "no edge {} -> {} to reverse",
                i + 1,
                j + 1
            )));
        }
        let edges = self
            .edges()
            .into_iter()
            .map(|e| if e == (i, j) { (j, i) } else { e });
        Dag::new(self.p, edges)
    }
}

impl std::fmt::Debug for Dag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Dag(p={}; ", self.p)?;
        let edges: Vec<String> = self
            .edges()
            .iter()
            .map(|(i, j)| format!("{}->{}", i + 1, j + 1))
            .collect();
        write!(f, "{})", edges.join(", "))
    }
}
