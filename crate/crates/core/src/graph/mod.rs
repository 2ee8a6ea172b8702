//! Exact graph algorithms on DAGs and partially directed graphs.

pub mod dag;
pub mod dsep;
pub mod mec;
pub mod meek;
pub mod nodeset;
pub mod pdag;
pub mod permutation;

pub use dag::{Dag, Relation};
pub use dsep::is_d_separated;
pub use mec::{enumerate_mec, markov_equivalent, max_undirected_clique, DEFAULT_MEC_GUARD};
pub use meek::{essential_graph, meek_closure, meek_closure_with, ConflictPolicy};
pub use nodeset::{NodeSet, MAX_NODES};
pub use pdag::{PairState, Pdag};
pub use permutation::Permutation;
