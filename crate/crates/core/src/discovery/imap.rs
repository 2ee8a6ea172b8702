use crate::ci::CiProvider;
use crate::error::{Error, Result};
use crate::graph::{Dag, NodeSet, Permutation};

/// The minimal I-MAP of the provider's distribution for `perm`: the edge
/// `π_a -> π_b` (`a < b`) is present iff `X_{π_a}` and `X_{π_b}` are dependent
/// given `{π_1, …, π_{b-1}} \ {π_a}`. One query per pair.
pub fn minimal_imap(provider: &CiProvider, perm: &Permutation) -> Result<Dag> {
    let p = provider.p();
    if perm.len() != p {
        return Err(Error::SizeMismatch(perm.len(), p));
    }
    let order = perm.as_slice();
    let mut edges = Vec::new();
    let mut before = NodeSet::empty();
    for &j in order {
        for i in before {
            if provider.dependent(i, j, before.without(i))? {
                edges.push((i, j));
            }
        }
        before.insert(j);
    }
    Dag::new(p, edges)
}
