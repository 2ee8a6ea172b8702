use std::path::Path;

use causalkit::bench::{
    ci_count_benchmark, shd, skeleton_shd, unfaithful_volume_grid, InstanceFamily,
    DEFAULT_LAMBDA_GRID,
};
use causalkit::ci::{
    exact_marginal_invariance, marginal_invariance_test, CiProvider, DEFAULT_ALPHA,
    DEFAULT_COVARIANCE_TOLERANCE,
};
use causalkit::discovery::{interventional_orient, run, Algorithm, InterventionOutcome, RunSettings};
use causalkit::graph::{enumerate_mec, essential_graph, max_undirected_clique};
use causalkit::io::{self, CovarianceJson, GraphJson, SemJson};
use causalkit::sem::{random_dag, random_sem};
use causalkit::Error;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;
use crate::output::write_atomic;
use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `{"version", "command", "args"}`, embedded in every JSON report.
fn run_config<A: Serialize>(command: &str, args: &A) -> Value {
    json!({
        "version": VERSION,
        "command": command,
        "args": args,
    })
}

fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    write_atomic(path, io::to_json_string(value)?.as_bytes())
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Pc => Algorithm::Pc,
            AlgoArg::Sp => Algorithm::Sp,
            AlgoArg::Gsp => Algorithm::Gsp,
            AlgoArg::Gas => Algorithm::Gas,
        }
    }
}

pub fn simulate(args: &SimulateArgs) -> Result<()> {
    if args.out_data.is_none()
        && args.out_graph.is_none()
        && args.out_sem.is_none()
        && args.out_covariance.is_none()
    {
        return Err(CliError::Usage(
            "nothing to write: pass at least one of --out-data, --out-graph, --out-sem, --out-covariance".into(),
        ));
    }
    let sem = match (&args.sem, args.p) {
        (Some(path), _) => io::read_sem(path)?,
        (None, Some(p)) => {
            if !(args.weight_low > 0.0 && args.weight_low <= args.weight_high) {
                return Err(CliError::Usage(
                    "--weight-low must be positive and at most --weight-high".into(),
                ));
            }
            let dag = random_dag(p, args.density, args.seed)?;
            random_sem(&dag, (args.weight_low, args.weight_high), args.seed)?
        }
        (None, None) => unreachable!("clap requires --p or --sem"),
    };
    let regime = match &args.intervention {
        Some(path) => sem.apply_intervention(&io::read_intervention(path)?.to_intervention(sem.p())?)?,
        None => sem.clone(),
    };
    if let Some(path) = &args.out_graph {
        write_json(path, &GraphJson::from_dag(sem.dag()))?;
    }
    if let Some(path) = &args.out_sem {
        write_json(path, &SemJson::from_sem(&sem))?;
    }
    if let Some(path) = &args.out_covariance {
        write_json(path, &CovarianceJson::from_matrix(&regime.covariance()))?;
    }
    if let Some(path) = &args.out_data {
        if args.n == 0 {
            return Err(CliError::Usage("--n must be at least 1".into()));
        }
        let x = regime.sample(args.n, args.seed);
        write_atomic(path, io::samples_to_csv(&x)?.as_bytes())?;
    }
    Ok(())
}

pub fn discover(args: &DiscoverArgs) -> Result<()> {
    let src = &args.source;
    let provider = if let Some(path) = &src.oracle {
        CiProvider::oracle(io::read_graph(path)?.to_dag()?)
    } else if let Some(path) = &src.data {
        CiProvider::samples(&io::read_samples(path)?, args.alpha.unwrap_or(DEFAULT_ALPHA))?
    } else if let Some(path) = &src.covariance {
        CiProvider::covariance(
            io::read_covariance(path)?,
            args.tolerance.unwrap_or(DEFAULT_COVARIANCE_TOLERANCE),
        )?
    } else {
        unreachable!("clap requires exactly one CI source")
    };
    let settings = RunSettings {
        seed: args.seed,
        sp_guard: args.limits.sp_max_p,
        gsp_depth: args.limits.gsp_depth.value(),
        gsp_restarts: args.limits.gsp_restarts,
    };
    let report = run(args.algorithm.into(), &provider, &settings).map_err(|e| match e {
        Error::GuardExceeded { p, guard, .. } => CliError::Usage(format!(
            "SP enumerates all {p}! permutations; p = {p} exceeds --sp-max-p {guard} (raise --sp-max-p to run anyway)"
        )),
        other => other.into(),
    })?;
    let mut out = io::report_json(&report, args.timing);
    out["run_config"] = run_config("discover", args);
    write_json(&args.report, &out)?;
    if let Some(path) = &args.out_graph {
        write_json(path, &GraphJson::from_pdag(&report.output))?;
    }
    Ok(())
}

pub fn orient(args: &OrientArgs) -> Result<()> {
    let base = io::read_graph(&args.graph)?.to_pdag()?;
    let p = base.p();
    if args.data.is_some() && args.intervention_data.len() != args.interventions.len() {
        return Err(CliError::Usage(format!(
            "{} --intervention files but {} --intervention-data files",
            args.interventions.len(),
            args.intervention_data.len()
        )));
    }
    let interventions = args
        .interventions
        .iter()
        .map(|path| Ok(io::read_intervention(path)?.to_intervention(p)?))
        .collect::<Result<Vec<_>>>()?;

    let mut outcomes = Vec::new();
    if let Some(sem_path) = &args.sem {
        let sem = io::read_sem(sem_path)?;
        check_p(sem.p(), p)?;
        let obs = sem.marginals();
        for (idx, interv) in interventions.iter().enumerate() {
            let intv = sem.apply_intervention(interv)?.marginals();
            let targets = interv.target_set();
            outcomes.push(InterventionOutcome {
                targets,
                results: (0..p)
                    .filter(|&k| !targets.contains(k))
                    .map(|k| exact_marginal_invariance(idx, k, obs[k], intv[k], args.tolerance))
                    .collect(),
            });
        }
    } else if let Some(obs_path) = &args.data {
        let obs = io::read_samples(obs_path)?;
        check_p(obs.ncols(), p)?;
        for (idx, (interv, path)) in interventions.iter().zip(&args.intervention_data).enumerate() {
            let data = io::read_samples(path)?;
            check_p(data.ncols(), p)?;
            let targets = interv.target_set();
            let results = (0..p)
                .filter(|&k| !targets.contains(k))
                .map(|k| {
                    let before: Vec<f64> = obs.column(k).iter().copied().collect();
                    let after: Vec<f64> = data.column(k).iter().copied().collect();
                    marginal_invariance_test(idx, k, &before, &after, args.alpha)
                })
                .collect::<causalkit::Result<Vec<_>>>()?;
            outcomes.push(InterventionOutcome { targets, results });
        }
    }
    let oriented = interventional_orient(&base, &outcomes)?;
    write_json(&args.out, &GraphJson::from_pdag(&oriented))?;
    if let Some(path) = &args.results {
        let all: Vec<_> = outcomes.iter().flat_map(|o| o.results.clone()).collect();
        write_json(
            path,
            &json!({
                "results": io::invariance_results_json(&all),
                "run_config": run_config("orient-interventional", args),
            }),
        )?;
    }
    Ok(())
}

fn check_p(found: usize, expected: usize) -> Result<()> {
    if found != expected {
        return Err(CliError::Data(format!(
            "input has {found} variables but the graph has {expected} nodes"
        )));
    }
    Ok(())
}

pub fn eval(args: &EvalArgs) -> Result<()> {
    let truth_json = io::read_graph(&args.truth)?;
    let truth = if args.essential {
        essential_graph(&truth_json.to_dag()?)
    } else {
        truth_json.to_pdag()?
    };
    let estimate = io::read_graph(&args.estimate)?.to_pdag()?;
    let out = json!({
        "shd": shd(&truth, &estimate)?,
        "skeleton_shd": skeleton_shd(&truth, &estimate)?,
        "run_config": run_config("eval", args),
    });
    match &args.out {
        Some(path) => write_json(path, &out),
        None => {
            print!("{}", io::to_json_string(&out)?);
            Ok(())
        }
    }
}

pub fn faithfulness_volume(args: &VolumeArgs) -> Result<()> {
    let lambdas = if args.lambdas.is_empty() {
        DEFAULT_LAMBDA_GRID.to_vec()
    } else {
        args.lambdas.clone()
    };
    let estimates =
        unfaithful_volume_grid(&lambdas, args.draws, (args.box_low, args.box_high), args.seed)?;
    let mut text = String::new();
    for e in &estimates {
        text.push_str(&serde_json::to_string(e).map_err(causalkit::Error::from)?);
        text.push('\n');
    }
    write_atomic(&args.out, text.as_bytes())
}

pub fn ci_bench(args: &BenchArgs) -> Result<()> {
    let algorithms: Vec<Algorithm> = args.algorithms.iter().map(|&a| a.into()).collect();
    let family = InstanceFamily {
        ps: args.ps.clone(),
        densities: args.densities.clone(),
    };
    let seeds: Vec<u64> = (0..args.instances).map(|k| args.seed + k).collect();
    let settings = RunSettings {
        seed: args.seed,
        sp_guard: args.limits.sp_max_p,
        gsp_depth: args.limits.gsp_depth.value(),
        gsp_restarts: args.limits.gsp_restarts,
    };
    let table = ci_count_benchmark(&algorithms, &family, &seeds, &settings)?;
    write_atomic(&args.out, table.to_tsv(args.timing)?.as_bytes())
}

pub fn mec(args: &MecArgs) -> Result<()> {
    let dag = io::read_graph(&args.graph)?.to_dag()?;
    let essential = essential_graph(&dag);
    write_json(&args.out, &GraphJson::from_pdag(&essential))?;
    let mut summary = json!({
        "p": dag.p(),
        "max_undirected_clique": max_undirected_clique(&essential),
    });
    if let Some(path) = &args.members {
        let members = enumerate_mec(&dag, args.mec_max_p).map_err(|e| match e {
            Error::GuardExceeded { p, guard, .. } => CliError::Usage(format!(
                "p = {p} exceeds --mec-max-p {guard} (raise --mec-max-p to enumerate anyway)"
            )),
            other => other.into(),
        })?;
        summary["mec_size"] = json!(members.len());
        let listed: Vec<GraphJson> = members.iter().map(GraphJson::from_dag).collect();
        write_json(path, &listed)?;
    }
    print!("{}", io::to_json_string(&summary)?);
    Ok(())
}
