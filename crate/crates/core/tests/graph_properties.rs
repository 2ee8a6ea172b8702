mod common;

use std::collections::BTreeMap;

use causalkit::ci::partial_correlation;
use causalkit::graph::{
    enumerate_mec, essential_graph, is_d_separated, markov_equivalent, meek_closure, Dag, Pdag,
};
use causalkit::sem::{random_dag, random_sem, LinearGaussianSem, DEFAULT_WEIGHT_BOX};
use common::{all_dags, all_queries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_family(p: usize, count: u64) -> Vec<Dag> {
    (0..count)
        .map(|s| random_dag(p, [0.2, 0.5, 0.8][(s % 3) as usize], 500 + s).unwrap())
        .collect()
}

#[test]
fn dag_counts_match_known_sequence() {
    let counts: Vec<usize> = (1..=4).map(|p| all_dags(p).len()).collect();
    assert_eq!(counts, vec![1, 3, 25, 543]);
}

#[test]
fn essential_graphs_agree_iff_markov_equivalent() {
    for p in 2..=4 {
        let dags = all_dags(p);
        let cpdags: Vec<Pdag> = dags.iter().map(essential_graph).collect();
        for (a, ga) in dags.iter().zip(&cpdags) {
            for (b, gb) in dags.iter().zip(&cpdags) {
                assert_eq!(ga == gb, markov_equivalent(a, b).unwrap(), "{a:?} vs {b:?}");
            }
        }
    }
}

#[test]
fn mec_members_share_skeleton_and_v_structures() {
    let mut dags = all_dags(4);
    dags.extend(random_family(6, 60));
    for g in &dags {
        let class = enumerate_mec(g, 10).unwrap();
        assert!(class.contains(g));
        for m in &class {
            assert_eq!(m.skeleton(), g.skeleton());
            assert_eq!(m.v_structures(), g.v_structures());
            assert_eq!(essential_graph(m), essential_graph(g));
        }
    }
}

#[test]
fn mec_size_matches_brute_force() {
    let dags = all_dags(4);
    for g in &dags {
        let brute = dags.iter().filter(|d| markov_equivalent(g, d).unwrap()).count();
        assert_eq!(enumerate_mec(g, 10).unwrap().len(), brute);
    }
}

#[test]
fn worked_mec_examples() {
    let chain = Dag::from_labels(3, &[(1, 2), (2, 3)]).unwrap();
    assert_eq!(enumerate_mec(&chain, 10).unwrap().len(), 3);

    let collider = Dag::from_labels(3, &[(1, 3), (2, 3)]).unwrap();
    let equivalent: Vec<Dag> = all_dags(3)
        .into_iter()
        .filter(|d| markov_equivalent(&collider, d).unwrap())
        .collect();
    assert_eq!(equivalent, vec![collider.clone()]);
    assert_eq!(enumerate_mec(&collider, 10).unwrap(), equivalent);
}

#[test]
fn covered_edge_reversal_stays_in_class() {
    let mut dags = all_dags(4);
    dags.extend(random_family(6, 60));
    for g in &dags {
        let class = enumerate_mec(g, 10).unwrap();
        for (i, j) in g.covered_edges() {
            assert!(class.contains(&g.reverse_edge(i, j).unwrap()));
        }
    }
}

#[test]
fn meek_closure_is_idempotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut dags = all_dags(4);
    dags.extend(random_family(7, 100));
    for g in &dags {
        let e = essential_graph(g);
        assert_eq!(meek_closure(&e).unwrap(), e);

        // Keep a random subset of the true directions.
        let mut directed = Vec::new();
        let mut undirected = Vec::new();
        for (i, j) in g.edges() {
            if rng.random_bool(0.3) {
                directed.push((i, j));
            } else {
                undirected.push((i.min(j), i.max(j)));
            }
        }
        let partial = Pdag::new(g.p(), directed, undirected).unwrap();
        let once = causalkit::graph::meek_closure_with(&partial, causalkit::graph::ConflictPolicy::Skip).unwrap();
        let twice = causalkit::graph::meek_closure_with(&once, causalkit::graph::ConflictPolicy::Skip).unwrap();
        assert_eq!(once, twice);
    }
}

#[test]
fn transitive_closure_is_acyclic_and_preserves_ancestry() {
    for g in random_family(7, 60) {
        let tc = g.transitive_closure();
        for i in 0..g.p() {
            assert_eq!(tc.children(i), g.descendants(i));
            assert_eq!(tc.descendants(i), g.descendants(i));
        }
    }
}

fn generic_sem(dag: &Dag, seed: u64) -> LinearGaussianSem {
    random_sem(dag, DEFAULT_WEIGHT_BOX, seed).unwrap()
}

#[test]
fn d_separation_matches_vanishing_partial_correlation() {
    let mut dags = all_dags(4);
    dags.extend(random_family(5, 60));
    dags.extend(random_family(6, 30));
    for (idx, g) in dags.iter().enumerate() {
        let cov = generic_sem(g, idx as u64).covariance();
        for (i, j, s) in all_queries(g.p()) {
            let rho = partial_correlation(&cov, i, j, s).unwrap();
            assert_eq!(
                is_d_separated(g, i, j, s).unwrap(),
                rho.abs() < 1e-9,
                "{g:?}: ({i}, {j} | {s:?}) rho = {rho}"
            );
        }
    }
}

#[test]
fn covariance_is_positive_definite() {
    for (idx, g) in random_family(7, 30).iter().enumerate() {
        let mut weights = BTreeMap::new();
        for (n, e) in g.edges().into_iter().enumerate() {
            weights.insert(e, if n % 2 == 0 { 3.0 } else { -2.5 });
        }
        let sem = LinearGaussianSem::with_unit_noise(g.clone(), weights).unwrap();
        assert!(sem.covariance().cholesky().is_some());
        assert!(generic_sem(g, idx as u64).covariance().cholesky().is_some());
    }
}
