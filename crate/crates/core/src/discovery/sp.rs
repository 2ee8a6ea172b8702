use std::collections::BTreeMap;

use serde_json::json;

use super::{minimal_imap, run_with_accounting, Algorithm, DiscoveryReport, RunOutput};
use crate::ci::CiProvider;
use crate::error::{Error, Result};
use crate::graph::{essential_graph, Permutation};

/// Default cap on `p` for the exhaustive permutation search.
pub const DEFAULT_SP_GUARD: usize = 7;

/// Sparsest permutation: the minimal I-MAP of every permutation, keeping the
/// one with fewest edges (first in lexicographic order on ties). Returns its
/// essential graph.
pub fn sp(provider: &CiProvider, guard: usize) -> Result<DiscoveryReport> {
    let p = provider.p();
    if p > guard {
        return Err(Error::GuardExceeded {
            what: "SP permutation search",
            p,
            guard,
        });
    }
    let mut echo = BTreeMap::new();
    echo.insert("ci".into(), json!(provider.describe()));
    echo.insert("guard".into(), json!(guard));
    run_with_accounting(Algorithm::Sp, provider, echo, || {
        let mut perm = Permutation::identity(p);
        let mut best = minimal_imap(provider, &perm)?;
        while perm.next_lexicographic() {
            let g = minimal_imap(provider, &perm)?;
            if g.n_edges() < best.n_edges() {
                best = g;
            }
        }
        Ok(RunOutput::done(essential_graph(&best)))
    })
}
