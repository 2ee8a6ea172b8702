use crate::error::{Error, Result};

/// An ordering of the nodes `0..p`, each appearing exactly once.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let p = order.len();
        let mut seen = vec![false; p];
        for &v in &order {
            if v >= p || seen[v] {
                return Err(Error::InvalidParameter(format!(
                    "{:?} is not a permutation of 0..{p}",
                    order
                )));
            }
            seen[v] = true;
        }
        Ok(Permutation(order))
    }

    /// One-based labels, e.g. `&[2, 1, 3]`.
    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        if labels.contains(&0) {
            return Err(Error::InvalidParameter("labels are one-based".into()));
        }
        Permutation::new(labels.iter().map(|l| l - 1).collect())
    }

    pub fn identity(p: usize) -> Self {
        Permutation((0..p).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// `positions()[v]` is the index of node `v` in the order.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (k, &v) in self.0.iter().enumerate() {
            pos[v] = k;
        }
        pos
    }

    /// Advances to the next permutation in lexicographic order; returns
    /// `false` (leaving `self` unchanged) when already at the last one.
    pub fn next_lexicographic(&mut self) -> bool {
        let v = &mut self.0;
        if v.len() < 2 {
            return false;
        }
        let mut i = v.len() - 1;
        while i > 0 && v[i - 1] >= v[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = v.len() - 1;
        while v[j] <= v[i - 1] {
            j -= 1;
        }
        v.swap(i - 1, j);
        v[i..].reverse();
        true
    }
}
