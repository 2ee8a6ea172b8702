//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines are always printed.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use causalkit::bench::{
    skeleton_shd, three_node_partial_correlations, unfaithful_volume, unfaithful_volume_grid,
    DEFAULT_LAMBDA_GRID,
};
use causalkit::ci::{exact_marginal_invariance, marginal_invariance_test, CiProvider, InvarianceResult};
use causalkit::discovery::{
    gas, gsp, interventional_orient, minimal_imap, pc, sp, GasConfig, GspConfig,
    InterventionOutcome, PcConfig, DEFAULT_GSP_DEPTH, DEFAULT_SP_GUARD,
};
use causalkit::graph::{
    essential_graph, markov_equivalent, max_undirected_clique, Dag, NodeSet, Pdag, Permutation,
};
use causalkit::sem::{
    derived_rng, random_dag, random_permutation, random_sem, Intervention, LinearGaussianSem,
    Mechanism, DEFAULT_WEIGHT_BOX,
};
use nalgebra::DMatrix;
use rand::Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

const DENSITIES: [f64; 3] = [0.2, 0.5, 0.8];

/// The oracle family: 200 DAGs per p ∈ {3, …, 7}, density cycling.
fn oracle_family() -> Vec<(u64, Dag)> {
    (3..=7usize)
        .flat_map(|p| {
            (0..200u64).map(move |k| {
                let seed = 10_000 * p as u64 + k;
                (seed, random_dag(p, DENSITIES[(k % 3) as usize], seed).unwrap())
            })
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut failures: BTreeMap<&str, usize> = BTreeMap::new();
    let mut runs = 0usize;
    for (seed, g) in oracle_family() {
        let truth = essential_graph(&g);
        let gsp_cfg = GspConfig {
            depth: usize::MAX,
            seed,
            ..GspConfig::default()
        };
        let mut outputs = vec![
            ("pc", pc(&CiProvider::oracle(g.clone()), &PcConfig::default()).map(|r| r.output)),
            ("gsp", gsp(&CiProvider::oracle(g.clone()), &gsp_cfg).map(|r| r.output)),
            ("gas", gas(&CiProvider::oracle(g.clone()), &GasConfig::default()).map(|r| r.output)),
        ];
        if g.p() <= 6 {
            outputs.push(("sp", sp(&CiProvider::oracle(g.clone()), DEFAULT_SP_GUARD).map(|r| r.output)));
        }
        for (name, out) in outputs {
            runs += 1;
            if !matches!(out, Ok(ref e) if *e == truth) {
                *failures.entry(name).or_default() += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    check(
        failures.is_empty() && elapsed < Duration::from_secs(120),
        format!("{runs} oracle runs over 1000 DAGs, mismatches {failures:?}, {:.1}s", elapsed.as_secs_f64()),
    )
}

fn criterion_2() -> Outcome {
    let mut violations = 0usize;
    let mut non_equivalent = 0usize;
    for k in 0..100u64 {
        let g = random_dag(5, DENSITIES[(k % 3) as usize], 20_000 + k).unwrap();
        let prov = CiProvider::oracle(g.clone());
        let mut perm = Permutation::identity(5);
        loop {
            let imap = minimal_imap(&prov, &perm).unwrap();
            if !markov_equivalent(&imap, &g).unwrap() {
                non_equivalent += 1;
                if imap.n_edges() <= g.n_edges() {
                    violations += 1;
                }
            }
            if !perm.next_lexicographic() {
                break;
            }
        }
    }
    check(
        violations == 0,
        format!("{non_equivalent} non-equivalent minimal I-MAPs over 12000 permutations, {violations} not strictly denser"),
    )
}

fn criterion_3() -> Outcome {
    let g = Dag::from_labels(3, &[(1, 3), (2, 3)]).unwrap();
    let prov = CiProvider::oracle(g.clone());
    let mut wrong = Vec::new();
    let mut perm = Permutation::identity(3);
    loop {
        let labels: Vec<usize> = perm.as_slice().iter().map(|v| v + 1).collect();
        let expected = if labels == [1, 2, 3] || labels == [2, 1, 3] {
            g.clone()
        } else {
            Dag::complete(&perm)
        };
        if minimal_imap(&prov, &perm).unwrap() != expected {
            wrong.push(labels);
        }
        if !perm.next_lexicographic() {
            break;
        }
    }
    check(wrong.is_empty(), format!("6 permutations, wrong: {wrong:?}"))
}

fn criterion_4() -> Outcome {
    let mut problems = Vec::new();
    for p in 2..=12usize {
        let g = random_dag(p, 0.4, 30_000 + p as u64).unwrap();
        let prov = CiProvider::oracle(g);
        minimal_imap(&prov, &random_permutation(p, p as u64)).unwrap();
        if prov.count() as usize != p * (p - 1) / 2 {
            problems.push(format!("minimal I-MAP p={p}: {}", prov.count()));
        }
        let r = pc(&CiProvider::oracle(Dag::empty(p).unwrap()), &PcConfig::default()).unwrap();
        if r.ci_queries as usize != p * (p - 1) / 2 {
            problems.push(format!("PC empty p={p}: {}", r.ci_queries));
        }
    }
    let mut worst = 0.0f64;
    for (_, g) in oracle_family() {
        let s = max_undirected_clique(&essential_graph(&g));
        let r = gas(&CiProvider::oracle(g.clone()), &GasConfig::default()).unwrap();
        let budget = (g.p() as f64).powi(3 * (s as i32 + 1));
        worst = worst.max(r.ci_queries as f64 / budget);
        if r.ci_queries as f64 > budget {
            problems.push(format!("GAS {g:?}: {} > {budget}", r.ci_queries));
        }
    }
    check(
        problems.is_empty(),
        format!("exact counts for p=2..12, GAS max queries/budget {worst:.2e}, problems {problems:?}"),
    )
}

/// Weather X1 causes ice cream sales X2 and sunburn X3.
fn fig_1a_sem() -> LinearGaussianSem {
    let dag = Dag::from_labels(3, &[(1, 2), (1, 3)]).unwrap();
    LinearGaussianSem::with_unit_noise(dag, BTreeMap::from([((0, 1), 0.8), ((0, 2), 0.6)])).unwrap()
}

fn criterion_5() -> Outcome {
    let sem = fig_1a_sem();
    let base = essential_graph(sem.dag());
    let target = Pdag::new(3, [(0, 1), (0, 2)], []).unwrap();
    let interventions = [
        Intervention::single(1, Mechanism::Do(1.5)),
        Intervention::single(2, Mechanism::Do(-1.0)),
    ];
    let regimes: Vec<LinearGaussianSem> =
        interventions.iter().map(|i| sem.apply_intervention(i).unwrap()).collect();

    let obs = sem.marginals();
    let exact: Vec<InterventionOutcome> = interventions
        .iter()
        .zip(&regimes)
        .enumerate()
        .map(|(idx, (interv, regime))| {
            let intv = regime.marginals();
            let targets = interv.target_set();
            InterventionOutcome {
                targets,
                results: (0..3)
                    .filter(|&k| !targets.contains(k))
                    .map(|k| exact_marginal_invariance(idx, k, obs[k], intv[k], 1e-12))
                    .collect(),
            }
        })
        .collect();
    let exact_ok = interventional_orient(&base, &exact).map(|g| g == target).unwrap_or(false);

    let column = |m: &DMatrix<f64>, k: usize| m.column(k).iter().copied().collect::<Vec<_>>();
    let mut correct = 0;
    for seed in 0..100u64 {
        let observed = sem.sample(5000, 3 * seed);
        let outcomes: Vec<InterventionOutcome> = interventions
            .iter()
            .zip(&regimes)
            .enumerate()
            .map(|(idx, (interv, regime))| {
                let data = regime.sample(5000, 3 * seed + 1 + idx as u64);
                let targets = interv.target_set();
                let results: Vec<InvarianceResult> = (0..3)
                    .filter(|&k| !targets.contains(k))
                    .map(|k| {
                        marginal_invariance_test(idx, k, &column(&observed, k), &column(&data, k), 0.01)
                            .unwrap()
                    })
                    .collect();
                InterventionOutcome { targets, results }
            })
            .collect();
        if matches!(interventional_orient(&base, &outcomes), Ok(g) if g == target) {
            correct += 1;
        }
    }
    check(
        exact_ok && correct >= 95,
        format!("exact marginals fully orient: {exact_ok}; sampled n=5000 correct in {correct}/100 seeds"),
    )
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let tiny = unfaithful_volume(1e-9, 100_000, (-1.0, 1.0), 6).unwrap();
    let all = unfaithful_volume(1.0, 100_000, (-1.0, 1.0), 6).unwrap();
    let grid = unfaithful_volume_grid(&DEFAULT_LAMBDA_GRID, 100_000, (-1.0, 1.0), 6).unwrap();
    let monotone = grid.windows(2).all(|w| w[0].fraction <= w[1].fraction);
    let cancel = three_node_partial_correlations(1.0, 1.0, -1.0)
        .iter()
        .fold(f64::INFINITY, |m, r| m.min(r.abs()));
    let flagged = DEFAULT_LAMBDA_GRID.iter().chain(&[1e-9, 1.0]).all(|&l| cancel <= l);
    let elapsed = start.elapsed();
    let fractions: Vec<String> = grid.iter().map(|v| format!("{}:{}", v.lambda, v.fraction)).collect();
    check(
        tiny.fraction <= 1e-3 && all.fraction == 1.0 && monotone && flagged && elapsed < Duration::from_secs(30),
        format!(
            "λ=1e-9 → {}, λ=1 → {}, grid [{}], (1,1,-1) min |ρ| = {cancel}, {:.1}s",
            tiny.fraction,
            all.fraction,
            fractions.join(", "),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut worst_invariant = 0.0f64;
    let mut smallest_change = f64::INFINITY;
    let mut problems = 0usize;
    for k in 0..100u64 {
        let mut rng = derived_rng(40_000, k);
        let p = rng.random_range(3..=8usize);
        let g = random_dag(p, 0.5, 40_000 + k).unwrap();
        let sem = random_sem(&g, DEFAULT_WEIGHT_BOX, k).unwrap();
        let n_targets = rng.random_range(1..=2usize.min(p));
        let mut targets = NodeSet::empty();
        while targets.len() < n_targets {
            targets.insert(rng.random_range(0..p));
        }
        let interv = Intervention {
            targets: targets.iter().map(|t| (t, Mechanism::Shift(3.0))).collect(),
        };
        let affected = targets
            .iter()
            .fold(targets, |acc, t| acc.union(g.descendants(t)));
        let before = sem.marginals();
        let after = sem.apply_intervention(&interv).unwrap().marginals();
        for j in 0..p {
            let diff = (before[j].0 - after[j].0).abs().max((before[j].1 - after[j].1).abs());
            if affected.contains(j) {
                smallest_change = smallest_change.min(diff);
                if diff <= 1e-12 {
                    problems += 1;
                }
            } else {
                worst_invariant = worst_invariant.max(diff);
                if diff > 1e-12 {
                    problems += 1;
                }
            }
        }
    }
    check(
        problems == 0,
        format!(
            "100 SEM/shift pairs: max non-descendant deviation {worst_invariant:e}, min descendant change {smallest_change:.3e}"
        ),
    )
}

fn median(mut v: Vec<usize>) -> f64 {
    v.sort_unstable();
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        (v[n / 2 - 1] + v[n / 2]) as f64 / 2.0
    }
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut pc_shd = Vec::new();
    let mut gsp_shd = Vec::new();
    for seed in 0..50u64 {
        let g = random_dag(10, 0.3, 50_000 + seed).unwrap();
        let truth = Pdag::from(&g);
        let sem = random_sem(&g, DEFAULT_WEIGHT_BOX, seed).unwrap();
        let x = sem.sample(10_000, seed);
        let prov = CiProvider::samples(&x, 0.01).unwrap();
        let r = pc(&prov, &PcConfig::default()).unwrap();
        pc_shd.push(skeleton_shd(&r.output, &truth).unwrap());
        let cfg = GspConfig {
            depth: DEFAULT_GSP_DEPTH,
            seed,
            ..GspConfig::default()
        };
        let r = gsp(&prov, &cfg).unwrap();
        gsp_shd.push(skeleton_shd(&r.output, &truth).unwrap());
    }
    let (m_pc, m_gsp) = (median(pc_shd), median(gsp_shd));
    let elapsed = start.elapsed();
    check(
        m_pc <= 2.0 && m_gsp <= 2.0 && elapsed < Duration::from_secs(300),
        format!("median skeleton SHD: PC {m_pc}, GSP {m_gsp}; {:.1}s", elapsed.as_secs_f64()),
    )
}

/// Runs the binary in `dir`; returns an error message on non-zero exit.
fn causalkit(dir: &Path, args: &[&str], threads: &str) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_causalkit"))
        .args(args)
        .current_dir(dir)
        .env("CAUSALKIT_THREADS", threads)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "`causalkit {}` exited with {}: {}",
            args.join(" "),
            out.status,
            String::from_utf8_lossy(&out.stderr).trim()
        ));
    }
    Ok(out.stdout)
}

/// Every subcommand with fixed flags; returns all produced files and stdout.
fn cli_session(dir: &Path, threads: &str) -> Result<BTreeMap<String, Vec<u8>>, String> {
    fs::write(dir.join("shift.json"), r#"{"targets": [{"node": 1, "kind": "shift", "value": 2.0}]}"#)
        .map_err(|e| e.to_string())?;
    let script: &[&[&str]] = &[
        &["simulate", "--p", "7", "--density", "0.4", "--n", "3000", "--seed", "7", "--out-data", "d.csv", "--out-graph", "g.json", "--out-sem", "s.json", "--out-covariance", "c.json"],
        &["simulate", "--sem", "s.json", "--intervention", "shift.json", "--n", "3000", "--seed", "8", "--out-data", "d1.csv"],
        &["discover", "--algo", "pc", "--oracle", "g.json", "--report", "r_pc.json", "--out-graph", "e.json"],
        &["discover", "--algo", "sp", "--oracle", "g.json", "--report", "r_sp.json"],
        &["discover", "--algo", "gsp", "--oracle", "g.json", "--seed", "3", "--report", "r_gsp.json"],
        &["discover", "--algo", "gas", "--oracle", "g.json", "--report", "r_gas.json"],
        &["discover", "--algo", "gsp", "--data", "d.csv", "--alpha", "0.01", "--report", "r_gsp_data.json"],
        &["discover", "--algo", "pc", "--covariance", "c.json", "--report", "r_pc_cov.json"],
        &["orient-interventional", "--graph", "e.json", "--sem", "s.json", "--intervention", "shift.json", "--out", "o_exact.json", "--results", "o_exact_results.json"],
        &["orient-interventional", "--graph", "e.json", "--data", "d.csv", "--intervention", "shift.json", "--intervention-data", "d1.csv", "--out", "o_data.json", "--results", "o_data_results.json"],
        &["eval", "--truth", "g.json", "--essential", "--estimate", "e.json"],
        &["faithfulness-volume", "--draws", "50000", "--seed", "1", "--out", "v.jsonl"],
        &["ci-bench", "--p", "4,6", "--density", "0.3,0.6", "--instances", "3", "--out", "t.tsv"],
        &["mec", "--graph", "g.json", "--out", "m.json", "--members", "members.json"],
    ];
    let mut files = BTreeMap::new();
    for (k, args) in script.iter().enumerate() {
        let stdout = causalkit(dir, args, threads)?;
        files.insert(format!("stdout-{k:02}-{}", args[0]), stdout);
    }
    for entry in fs::read_dir(dir).map_err(|e| e.to_string())? {
        let entry = entry.map_err(|e| e.to_string())?;
        let name = entry.file_name().to_string_lossy().into_owned();
        files.insert(name, fs::read(entry.path()).map_err(|e| e.to_string())?);
    }
    Ok(files)
}

fn criterion_9() -> Outcome {
    let dirs: Vec<tempfile::TempDir> = (0..3).map(|_| tempfile::tempdir().unwrap()).collect();
    let first = cli_session(dirs[0].path(), "1")?;
    let second = cli_session(dirs[1].path(), "1")?;
    let parallel = cli_session(dirs[2].path(), "4")?;
    let differing: Vec<&String> = first
        .keys()
        .filter(|k| second.get(*k) != first.get(*k) || parallel.get(*k) != first.get(*k))
        .collect();
    let same_keys = first.keys().eq(second.keys()) && first.keys().eq(parallel.keys());
    check(
        differing.is_empty() && same_keys,
        format!(
            "7 subcommands, {} outputs compared across 3 runs (1 and 4 threads), differing: {differing:?}",
            first.len()
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("oracle exactness", criterion_1),
        ("sparsity of non-equivalent minimal I-MAPs", criterion_2),
        ("minimal I-MAP worked example", criterion_3),
        ("query budgets", criterion_4),
        ("interventional orientation", criterion_5),
        ("faithfulness geometry", criterion_6),
        ("intervention invariance", criterion_7),
        ("finite-sample regression", criterion_8),
        ("CLI determinism", criterion_9),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {} [{name}]: {status} ({detail})", k + 1);
    }
    if failed > 0 {
        println!("{failed} of 9 criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
