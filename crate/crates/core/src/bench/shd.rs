use crate::error::{Error, Result};
use crate::graph::Pdag;

/// Structural Hamming distance: the number of node pairs whose state differs,
/// where a pair is absent, undirected, or directed one of two ways. A
/// reversed edge costs 1, as does a missing or extra edge.
pub fn shd(g1: &Pdag, g2: &Pdag) -> Result<usize> {
    count_pairs(g1, g2, |a, b, i, j| a.pair_state(i, j) != b.pair_state(i, j))
}

/// Number of node pairs adjacent in exactly one of the two graphs.
pub fn skeleton_shd(g1: &Pdag, g2: &Pdag) -> Result<usize> {
    count_pairs(g1, g2, |a, b, i, j| a.adjacent(i, j) != b.adjacent(i, j))
}

fn count_pairs(
    g1: &Pdag,
    g2: &Pdag,
    differs: impl Fn(&Pdag, &Pdag, usize, usize) -> bool,
) -> Result<usize> {
    if g1.p() != g2.p() {
        return Err(Error::SizeMismatch(g1.p(), g2.p()));
    }
    let p = g1.p();
    Ok((0..p)
        .flat_map(|i| ((i + 1)..p).map(move |j| (i, j)))
        .filter(|&(i, j)| differs(g1, g2, i, j))
        .count())
}
