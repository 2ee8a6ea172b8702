//! d-separation by reachability ("Bayes ball").
//!
//! A trail from `i` is explored as pairs `(node, direction)`. `Up` means the
//! node was entered from one of its children, `Down` from one of its parents.
//! A non-collider passes the ball only when it is outside the conditioning
//! set; a collider passes it only when it is in the ancestral closure of the
//! conditioning set. Runs in `O(p + |E|)`.

use super::dag::{check_node, Dag};
use super::nodeset::NodeSet;
use crate::error::{Error, Result};

#[derive(Clone, Copy)]
enum Dir {
    Up,
    Down,
}

/// Checks the preconditions shared by every CI-style query.
pub(crate) fn validate_query(p: usize, i: usize, j: usize, cond: NodeSet) -> Result<()> {
    check_node(i, p)?;
    check_node(j, p)?;
    if let Some(max) = cond.iter().last() {
        check_node(max, p)?;
    }
    if i == j {
        return Err(Error::InvalidQuery(format!("i = j = {}", i + 1)));
    }
    if cond.contains(i) || cond.contains(j) {
        return Err(Error::InvalidQuery(
            "conditioning set contains an endpoint".into(),
        ));
    }
    Ok(())
}

/// True iff `i` and `j` are d-separated by `cond` in `dag`.
pub fn is_d_separated(dag: &Dag, i: usize, j: usize, cond: NodeSet) -> Result<bool> {
    validate_query(dag.p(), i, j, cond)?;
    Ok(!d_connected_set(dag, i, cond).contains(j))
}

/// Every node d-connected to `source` given `cond` (excluding nodes in `cond`).
pub fn d_connected_set(dag: &Dag, source: usize, cond: NodeSet) -> NodeSet {
    let opens_collider = dag.ancestral_closure(cond);
    let mut seen_up = NodeSet::empty();
    let mut seen_down = NodeSet::empty();
    let mut reached = NodeSet::empty();
    let mut stack = vec![(source, Dir::Up)];
    seen_up.insert(source);

    while let Some((v, dir)) = stack.pop() {
        if !cond.contains(v) {
            reached.insert(v);
        }
        let go_up = |stack: &mut Vec<(usize, Dir)>, seen_up: &mut NodeSet| {
            for u in dag.parents(v).difference(*seen_up) {
                seen_up.insert(u);
                stack.push((u, Dir::Up));
            }
        };
        let go_down = |stack: &mut Vec<(usize, Dir)>, seen_down: &mut NodeSet| {
            for c in dag.children(v).difference(*seen_down) {
                seen_down.insert(c);
                stack.push((c, Dir::Down));
            }
        };
        match dir {
            Dir::Up => {
                if !cond.contains(v) {
                    go_up(&mut stack, &mut seen_up);
                    go_down(&mut stack, &mut seen_down);
                }
            }
            Dir::Down => {
                if !cond.contains(v) {
                    go_down(&mut stack, &mut seen_down);
                }
                if opens_collider.contains(v) {
                    go_up(&mut stack, &mut seen_up);
                }
            }
        }
    }
    reached.without(source)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(labels: &[usize]) -> NodeSet {
        labels.iter().map(|l| l - 1).collect()
    }

    /// Enumerates every simple undirected path and checks the blocking rules
    /// directly.
    fn naive_d_separated(dag: &Dag, i: usize, j: usize, cond: NodeSet) -> bool {
        fn walk(
            dag: &Dag,
            path: &mut Vec<usize>,
            target: usize,
            cond: NodeSet,
            anc: NodeSet,
        ) -> bool {
            let last = *path.last().unwrap();
            if last == target {
                return path_active(dag, path, cond, anc);
            }
            for n in dag.neighbors(last) {
                if path.contains(&n) {
                    continue;
                }
                path.push(n);
                let open = walk(dag, path, target, cond, anc);
                path.pop();
                if open {
                    return true;
                }
            }
            false
        }
        fn path_active(dag: &Dag, path: &[usize], cond: NodeSet, anc: NodeSet) -> bool {
            path.windows(3).all(|w| {
                let (a, b, c) = (w[0], w[1], w[2]);
                let collider = dag.has_edge(a, b) && dag.has_edge(c, b);
                if collider {
                    anc.contains(b)
                } else {
                    !cond.contains(b)
                }
            })
        }
        let anc = dag.ancestral_closure(cond);
        !walk(dag, &mut vec![i], j, cond, anc)
    }

    #[test]
    fn collider_examples() {
        let g = Dag::from_labels(3, &[(1, 3), (2, 3)]).unwrap();
        assert!(is_d_separated(&g, 0, 1, s(&[])).unwrap());
        assert!(!is_d_separated(&g, 0, 1, s(&[3])).unwrap());
    }

    #[test]
    fn chain_blocked_by_middle() {
        let g = Dag::from_labels(3, &[(1, 2), (2, 3)]).unwrap();
        assert!(is_d_separated(&g, 0, 2, s(&[2])).unwrap());
        assert!(!is_d_separated(&g, 0, 2, s(&[])).unwrap());
    }

    #[test]
    fn descendant_of_collider_unblocks() {
        let g = Dag::from_labels(4, &[(1, 3), (2, 3), (3, 4)]).unwrap();
        assert!(!is_d_separated(&g, 0, 1, s(&[4])).unwrap());
        assert!(is_d_separated(&g, 0, 1, s(&[])).unwrap());
    }

    #[test]
    fn invalid_queries() {
        let g = Dag::from_labels(3, &[(1, 2)]).unwrap();
        assert!(is_d_separated(&g, 0, 0, s(&[])).is_err());
        assert!(is_d_separated(&g, 0, 1, s(&[1])).is_err());
        assert!(is_d_separated(&g, 0, 5, s(&[])).is_err());
        assert!(is_d_separated(&g, 0, 1, s(&[4])).is_err());
    }

    /// Every DAG on up to 4 nodes and a sample of 5- and 6-node DAGs (all
    /// encoded by a bitmask over the pairs of a fixed order, then relabeled).
    #[test]
    fn reachability_matches_path_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for p in 2..=6usize {
            let pairs: Vec<(usize, usize)> =
                (0..p).flat_map(|a| (a + 1..p).map(move |b| (a, b))).collect();
            let n_graphs = if p <= 4 { 1usize << pairs.len() } else { 60 };
            for g in 0..n_graphs {
                let mask: u64 = if p <= 4 { g as u64 } else { rng.random() };
                let mut labels: Vec<usize> = (0..p).collect();
                for k in (1..p).rev() {
                    labels.swap(k, rng.random_range(0..=k));
                }
                let edges = pairs
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, &(a, b))| (labels[a], labels[b]));
                let dag = Dag::new(p, edges).unwrap();
                for i in 0..p {
                    for j in (i + 1)..p {
                        let rest = NodeSet::full(p).without(i).without(j);
                        for bits in 0..(1u64 << p) {
                            let cond = NodeSet::from_bits(bits);
                            if !cond.is_subset(rest) {
                                continue;
                            }
                            assert_eq!(
                                is_d_separated(&dag, i, j, cond).unwrap(),
                                naive_d_separated(&dag, i, j, cond),
                                "{dag:?} {i} {j} {cond:?}"
                            );
                        }
                    }
                }
            }
        }
    }
}
