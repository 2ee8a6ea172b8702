#![allow(dead_code)]

use causalkit::graph::{Dag, NodeSet};

/// Every labelled DAG on `p` nodes: each pair is absent, forward or
/// backward; cyclic assignments are skipped.
pub fn all_dags(p: usize) -> Vec<Dag> {
    let pairs: Vec<(usize, usize)> = (0..p)
        .flat_map(|i| ((i + 1)..p).map(move |j| (i, j)))
        .collect();
    let total = 3usize.pow(pairs.len() as u32);
    (0..total)
        .filter_map(|mut code| {
            let mut edges = Vec::new();
            for &(i, j) in &pairs {
                match code % 3 {
                    1 => edges.push((i, j)),
                    2 => edges.push((j, i)),
                    _ => {}
                }
                code /= 3;
            }
            Dag::new(p, edges).ok()
        })
        .collect()
}

/// All `(i, j, S)` with `i < j` and `S ⊆ [p] \ {i, j}`.
pub fn all_queries(p: usize) -> Vec<(usize, usize, NodeSet)> {
    let mut out = Vec::new();
    for i in 0..p {
        for j in (i + 1)..p {
            let rest = NodeSet::full(p).without(i).without(j);
            for bits in 0..(1u64 << p) {
                let s = NodeSet::from_bits(bits);
                if s.is_subset(rest) {
                    out.push((i, j, s));
                }
            }
        }
    }
    out
}
