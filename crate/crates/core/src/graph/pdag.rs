//! Partially directed graphs: essential graphs and discovery outputs.

use super::dag::{check_node, check_p, Dag};
use super::nodeset::NodeSet;
use crate::error::{Error, Result};

/// A graph with directed edges `i -> j` and undirected edges `i - j`.
///
/// Every pair of nodes carries at most one edge. The directed part is not
/// required to be acyclic here; [`super::meek::meek_closure`] and the
/// discovery algorithms check that where it matters.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pdag {
    p: usize,
    parents: Vec<NodeSet>,
    children: Vec<NodeSet>,
    undirected: Vec<NodeSet>,
}

/// Status of an unordered pair `{i, j}` viewed from `i` to `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairState {
    Absent,
    Undirected,
    Forward,
    Backward,
}

impl Pdag {
    pub fn empty(p: usize) -> Result<Self> {
        check_p(p)?;
        Ok(Pdag {
            p,
            parents: vec![NodeSet::empty(); p],
            children: vec![NodeSet::empty(); p],
            undirected: vec![NodeSet::empty(); p],
        })
    }

    /// Builds a PDAG from zero-based edge lists.
    pub fn new(
        p: usize,
        directed: impl IntoIterator<Item = (usize, usize)>,
        undirected: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut g = Pdag::empty(p)?;
        for (i, j) in directed {
            g.check_new_pair(i, j)?;
            g.insert_directed(i, j);
        }
        for (i, j) in undirected {
            g.check_new_pair(i, j)?;
            g.insert_undirected(i, j);
        }
        Ok(g)
    }

    fn check_new_pair(&self, i: usize, j: usize) -> Result<()> {
        check_node(i, self.p)?;
        check_node(j, self.p)?;
        if i == j {
            return Err(Error::InvalidGraph(format!("self-loop at node {}", i + 1)));
        }
        if self.adjacent(i, j) {
            return Err(Error::InvalidGraph(format!(
                "pair {{{}, {}}} listed more than once",
                i + 1,
                j + 1
            )));
        }
        Ok(())
    }

    pub(crate) fn insert_directed(&mut self, i: usize, j: usize) {
        self.children[i].insert(j);
        self.parents[j].insert(i);
    }

    pub(crate) fn insert_undirected(&mut self, i: usize, j: usize) {
        self.undirected[i].insert(j);
        self.undirected[j].insert(i);
    }

    /// Turns the undirected edge `i - j` into `i -> j`.
    pub(crate) fn orient(&mut self, i: usize, j: usize) {
        debug_assert!(self.is_undirected(i, j));
        self.undirected[i].remove(j);
        self.undirected[j].remove(i);
        self.insert_directed(i, j);
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n_edges(&self) -> usize {
        let d: usize = self.children.iter().map(|s| s.len()).sum();
        let u: usize = self.undirected.iter().map(|s| s.len()).sum();
        d + u / 2
    }

    /// Directed edges in lexicographic order.
    pub fn directed_edges(&self) -> Vec<(usize, usize)> {
        (0..self.p)
            .flat_map(|i| self.children[i].iter().map(move |j| (i, j)))
            .collect()
    }

    /// Undirected edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn undirected_edges(&self) -> Vec<(usize, usize)> {
        (0..self.p)
            .flat_map(|i| {
                self.undirected[i]
                    .iter()
                    .filter(move |&j| j > i)
                    .map(move |j| (i, j))
            })
            .collect()
    }

    pub fn is_directed(&self, i: usize, j: usize) -> bool {
        self.children[i].contains(j)
    }

    pub fn is_undirected(&self, i: usize, j: usize) -> bool {
        self.undirected[i].contains(j)
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.neighbors(i).contains(j)
    }

    /// Directed parents.
    pub fn parents(&self, i: usize) -> NodeSet {
        self.parents[i]
    }

    /// Directed children.
    pub fn children(&self, i: usize) -> NodeSet {
        self.children[i]
    }

    pub fn undirected_neighbors(&self, i: usize) -> NodeSet {
        self.undirected[i]
    }

    /// Every node sharing an edge of any kind with `i`.
    pub fn neighbors(&self, i: usize) -> NodeSet {
        self.parents[i]
            .union(self.children[i])
            .union(self.undirected[i])
    }

    pub fn pair_state(&self, i: usize, j: usize) -> PairState {
        if self.is_undirected(i, j) {
            PairState::Undirected
        } else if self.is_directed(i, j) {
            PairState::Forward
        } else if self.is_directed(j, i) {
            PairState::Backward
        } else {
            PairState::Absent
        }
    }

    /// True iff a directed path `from -> ... -> to` exists (length ≥ 1).
    pub fn has_directed_path(&self, from: usize, to: usize) -> bool {
        let mut seen = NodeSet::empty();
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            for c in self.children[v] {
                if c == to {
                    return true;
                }
                if !seen.contains(c) {
                    seen.insert(c);
                    stack.push(c);
                }
            }
        }
        false
    }

    pub fn directed_part_is_acyclic(&self) -> bool {
        (0..self.p).all(|i| !self.has_directed_path(i, i))
    }

    /// Unshielded colliders `(i, k, j)` of the directed part, `i < j`, sorted.
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

    /// Skeleton with every edge undirected.
    pub fn skeleton(&self) -> Pdag {
        let mut g = Pdag::empty(self.p).expect("p already validated");
        for i in 0..self.p {
            for j in self.neighbors(i).iter().filter(|&j| j > i) {
                g.insert_undirected(i, j);
            }
        }
        g
    }

    /// The DAG with the same edges, if the graph has no undirected edges and
    /// is acyclic.
    pub fn to_dag(&self) -> Option<Dag> {
        if !self.undirected_edges().is_empty() {
            return None;
        }
        Dag::new(self.p, self.directed_edges()).ok()
    }
}

impl From<&Dag> for Pdag {
    fn from(dag: &Dag) -> Self {
        Pdag::new(dag.p(), dag.edges(), std::iter::empty()).expect("a Dag is a valid Pdag")
    }
}

impl std::fmt::Debug for Pdag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = self
            .directed_edges()
            .iter()
            .map(|(i, j)| format!("{}->{}", i + 1, j + 1))
            .collect();
        parts.extend(
            self.undirected_edges()
                .iter()
                .map(|(i, j)| format!("{}-{}", i + 1, j + 1)),
        );
        write!(f, "Pdag(p={}; {})", self.p, parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicate_pairs() {
        assert!(Pdag::new(3, [(0, 1)], [(0, 1)]).is_err());
        assert!(Pdag::new(3, [(0, 1), (1, 0)], []).is_err());
        assert!(Pdag::new(3, [], [(0, 1), (1, 0)]).is_err());
        assert!(Pdag::new(3, [], [(0, 3)]).is_err());
    }

    #[test]
    fn pair_states() {
        let g = Pdag::new(3, [(0, 1)], [(1, 2)]).unwrap();
        assert_eq!(g.pair_state(0, 1), PairState::Forward);
        assert_eq!(g.pair_state(1, 0), PairState::Backward);
        assert_eq!(g.pair_state(2, 1), PairState::Undirected);
        assert_eq!(g.pair_state(0, 2), PairState::Absent);
        assert_eq!(g.n_edges(), 2);
    }

    #[test]
    fn to_dag_requires_full_orientation() {
        let g = Pdag::new(3, [(0, 1)], [(1, 2)]).unwrap();
        assert!(g.to_dag().is_none());
        let cyc = Pdag::new(3, [(0, 1), (1, 2), (2, 0)], []).unwrap();
        assert!(!cyc.directed_part_is_acyclic());
        assert!(cyc.to_dag().is_none());
    }
}
