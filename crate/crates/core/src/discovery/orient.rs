use crate::ci::InvarianceResult;
use crate::error::{Error, Result};
use crate::graph::{meek_closure, NodeSet, Pdag};

/// Marginal invariance results of one intervention with known targets.
#[derive(Debug, Clone)]
pub struct InterventionOutcome {
    pub targets: NodeSet,
    pub results: Vec<InvarianceResult>,
}

impl InterventionOutcome {
    fn changed(&self, node: usize) -> Option<bool> {
        self.results.iter().find(|r| r.node == node).map(|r| r.changed)
    }
}

/// Orients undirected edges of a CPDAG from marginal invariance.
///
/// For an intervention with targets `I` and an undirected edge `u - v`,
/// `u ∈ I`, `v ∉ I`: a changed marginal of `X_v` orients `u -> v`, an
/// unchanged one orients `v -> u`. Nodes without a result are skipped.
/// Meek closure then propagates. Adjacencies are never removed and directed
/// edges of `base` are never touched.
pub fn interventional_orient(base: &Pdag, outcomes: &[InterventionOutcome]) -> Result<Pdag> {
    let mut claims: Vec<(usize, usize)> = Vec::new();
    for outcome in outcomes {
        for u in outcome.targets {
            if u >= base.p() {
                return Err(Error::NodeOutOfRange { node: u, p: base.p() });
            }
            for v in base.undirected_neighbors(u).difference(outcome.targets) {
                match outcome.changed(v) {
                    Some(true) => claims.push((u, v)),
                    Some(false) => claims.push((v, u)),
                    None => {}
                }
            }
        }
    }
    claims.sort_unstable();
    claims.dedup();
    let conflicts: Vec<String> = claims
        .iter()
        .filter(|&&(a, b)| a < b && claims.contains(&(b, a)))
        .map(|&(a, b)| format!("{}-{}", a + 1, b + 1))
        .collect();
    if !conflicts.is_empty() {
        return Err(Error::Inconsistent(format!(
            "interventions disagree on edges {}",
            conflicts.join(", ")
        )));
    }
    let mut g = base.clone();
    for (a, b) in claims {
        g.orient(a, b);
    }
    meek_closure(&g)
}
