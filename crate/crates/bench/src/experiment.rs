//! Experiment driver: problem loading, seeded repetitions, per-run and
//! mean CSV output, manifest, and the fixed-rate grid search.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use steffensen::data::{format_float, generate_synthetic_ridge, parse_libsvm, SyntheticSpec};
use steffensen::deterministic::{reference_optimum, ReferenceOptimum};
use steffensen::linalg::ParamVector;
use steffensen::objective::{ErmProblem, LossKind};
use steffensen::stochastic::{run, StochOptConfig, StochTrace};

use crate::config::{AlgorithmSpec, ExperimentConfig, ProblemKind};

/// A problem ready to optimize, with certified curvature constants.
pub struct LoadedProblem {
    pub problem: ErmProblem,
    pub name: String,
}

/// Builds the ERM problem for `cfg`, resolving dataset files against the
/// configured data directory or `STEFFENSEN_DATA_DIR`.
pub fn load_problem(cfg: &ExperimentConfig) -> Result<LoadedProblem> {
    let (data, name) = match &cfg.problem {
        ProblemKind::SyntheticRidge { n, d, data_seed } => {
            let spec = SyntheticSpec {
                n: *n,
                d: *d,
                seed: *data_seed,
            };
            let (data, _) = generate_synthetic_ridge(&spec);
            (data, format!("synthetic-ridge-{n}x{d}"))
        }
        ProblemKind::LogisticW6a | ProblemKind::SquaredHingeA6a => {
            let file = cfg.problem.file_name().unwrap();
            let path = resolve_data_file(cfg, file)?;
            let reader = BufReader::new(
                File::open(&path).with_context(|| format!("opening {}", path.display()))?,
            );
            let d_override = match &cfg.problem {
                ProblemKind::LogisticW6a => Some(300),
                _ => Some(123),
            };
            let data = parse_libsvm(reader, d_override, false)
                .with_context(|| format!("parsing {}", path.display()))?;
            (data, file.to_string())
        }
        ProblemKind::CustomFile { path, .. } => {
            let reader = BufReader::new(
                File::open(path).with_context(|| format!("opening {}", path.display()))?,
            );
            let data = parse_libsvm(reader, None, false)
                .with_context(|| format!("parsing {}", path.display()))?;
            let name = path
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "custom".to_string());
            (data, name)
        }
    };
    let mut problem = ErmProblem::new(data, cfg.problem.loss(), cfg.lambda);
    problem
        .certify_constants()
        .map_err(|e| anyhow::anyhow!("certifying curvature constants: {e}"))?;
    Ok(LoadedProblem { problem, name })
}

fn resolve_data_file(cfg: &ExperimentConfig, file: &str) -> Result<PathBuf> {
    let dir = match &cfg.data_dir {
        Some(d) => d.clone(),
        None => match std::env::var_os("STEFFENSEN_DATA_DIR") {
            Some(d) => PathBuf::from(d),
            None => PathBuf::from("data"),
        },
    };
    let path = dir.join(file);
    if !path.is_file() {
        bail!(
            "dataset file {} not found; place the LIBSVM file there or point \
             --data-dir / STEFFENSEN_DATA_DIR at its directory",
            path.display()
        );
    }
    Ok(path)
}

/// Gradient-norm tolerance for the reference optimum, per loss.
pub fn reference_tol(loss: LossKind) -> f64 {
    match loss {
        LossKind::SquaredLoss => 1e-12,
        _ => 1e-10,
    }
}

/// Outcome of one (algorithm, repetition) run.
pub struct RunResult {
    pub label: String,
    pub rep: usize,
    pub seed: u64,
    pub trace: StochTrace,
    pub diverged: bool,
}

/// Per-algorithm aggregate reported by `run_experiment`.
#[derive(Debug)]
pub struct AlgorithmSummary {
    pub label: String,
    pub outer_iters: usize,
    pub final_mean_suboptimality: f64,
    pub total_passes: f64,
    pub excluded_runs: usize,
    /// Mean suboptimality per outer iteration (index 0 = initial point).
    pub mean_suboptimality: Vec<f64>,
}

#[derive(Debug)]
pub struct ExperimentSummary {
    pub problem_name: String,
    pub n: usize,
    pub d: usize,
    pub f_star: f64,
    pub f_star_certified: bool,
    pub algorithms: Vec<AlgorithmSummary>,
}

fn stoch_config(
    spec: &AlgorithmSpec,
    cfg: &ExperimentConfig,
    n: usize,
    outer_iters: usize,
    seed: u64,
) -> StochOptConfig {
    let mut c = StochOptConfig::new(
        spec.algorithm,
        cfg.m_rule.resolve(n),
        cfg.b,
        outer_iters,
        seed,
    );
    c.fixed_eta = spec.fixed_eta;
    c.prox = spec.prox;
    c
}

/// Runs every configured algorithm for `repetitions` seeds from x0 = 0,
/// writes per-run CSVs, a mean CSV per algorithm and a key=value manifest,
/// and returns the summary. Divergent runs are kept on disk but excluded
/// from means; the manifest counts them.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    cfg.validate().map_err(|e| anyhow::anyhow!(e))?;
    let loaded = load_problem(cfg)?;
    let p = &loaded.problem;
    let n = p.n();
    fs::create_dir_all(&cfg.output_dir)
        .with_context(|| format!("creating {}", cfg.output_dir.display()))?;
    let reference = reference_optimum(p, reference_tol(p.loss()));
    let x0 = ParamVector::zeros(p.d());

    // Fan out (algorithm, repetition) pairs; merge deterministically by
    // (algorithm index, rep) afterwards.
    let jobs: Vec<(usize, usize)> = (0..cfg.algorithms.len())
        .flat_map(|a| (0..cfg.repetitions).map(move |r| (a, r)))
        .collect();
    let mut results: Vec<RunResult> = jobs
        .into_par_iter()
        .map(|(a, r)| {
            let spec = &cfg.algorithms[a];
            let outer_iters = cfg.outer_iters_for(spec.algorithm, n);
            let seed = cfg.base_seed + r as u64;
            let sc = stoch_config(spec, cfg, n, outer_iters, seed);
            let (trace, diverged) = match run(p, &sc, &x0) {
                Ok(t) => (t, false),
                Err((_, t)) => (t, true),
            };
            RunResult {
                label: spec.label(),
                rep: r,
                seed,
                trace,
                diverged,
            }
        })
        .collect();
    results.sort_by(|a, b| (&a.label, a.rep).cmp(&(&b.label, b.rep)));

    for res in &results {
        let path = cfg
            .output_dir
            .join(format!("{}_rep{}.csv", res.label, res.rep));
        let mut w = BufWriter::new(File::create(&path)?);
        steffensen::data::write_trace_csv(&res.trace, reference.f_star, n, &mut w)?;
        w.flush()?;
    }

    let mut algorithms = Vec::new();
    for spec in &cfg.algorithms {
        let label = spec.label();
        let outer_iters = cfg.outer_iters_for(spec.algorithm, n);
        let runs: Vec<&RunResult> = results.iter().filter(|r| r.label == label).collect();
        let kept: Vec<&&RunResult> = runs.iter().filter(|r| !r.diverged).collect();
        let excluded_runs = runs.len() - kept.len();
        if kept.is_empty() {
            bail!("all {} repetitions of {label} diverged", runs.len());
        }
        let rows = outer_iters + 1;
        let mut mean_sub = vec![0.0f64; rows];
        let mut mean_wall = vec![0.0f64; rows];
        for r in &kept {
            for (i, rec) in r.trace.records.iter().enumerate() {
                mean_sub[i] += (rec.f_value - reference.f_star) / kept.len() as f64;
                mean_wall[i] += rec.wall_seconds / kept.len() as f64;
            }
        }
        let passes: Vec<f64> = kept[0]
            .trace
            .records
            .iter()
            .map(|rec| rec.grad_evals as f64 / n as f64)
            .collect();
        let mean_path = cfg.output_dir.join(format!("{label}_mean.csv"));
        let mut w = BufWriter::new(File::create(&mean_path)?);
        writeln!(w, "outer_iter,mean_suboptimality,passes,mean_wall_seconds")?;
        for i in 0..rows.min(passes.len()) {
            writeln!(
                w,
                "{},{},{},{}",
                i,
                format_float(mean_sub[i]),
                format_float(passes[i]),
                format_float(mean_wall[i]),
            )?;
        }
        w.flush()?;
        algorithms.push(AlgorithmSummary {
            label,
            outer_iters,
            final_mean_suboptimality: *mean_sub.last().unwrap(),
            total_passes: *passes.last().unwrap(),
            excluded_runs,
            mean_suboptimality: mean_sub,
        });
    }

    write_manifest(cfg, &loaded, &reference, &results, &algorithms)?;
    Ok(ExperimentSummary {
        problem_name: loaded.name,
        n,
        d: p.d(),
        f_star: reference.f_star,
        f_star_certified: reference.certified,
        algorithms,
    })
}

fn write_manifest(
    cfg: &ExperimentConfig,
    loaded: &LoadedProblem,
    reference: &ReferenceOptimum,
    results: &[RunResult],
    algorithms: &[AlgorithmSummary],
) -> Result<()> {
    let p = &loaded.problem;
    let path = cfg.output_dir.join("manifest.txt");
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "problem = {}", loaded.name)?;
    writeln!(w, "loss = {:?}", p.loss())?;
    writeln!(w, "n = {}", p.n())?;
    writeln!(w, "d = {}", p.d())?;
    writeln!(w, "lambda = {:e}", p.lambda())?;
    writeln!(w, "m = {}", cfg.m_rule.resolve(p.n()))?;
    writeln!(w, "b = {}", cfg.b)?;
    if let (Some(mu), Some(l)) = (p.strong_convexity_mu(), p.smoothness_l()) {
        writeln!(w, "mu = {}", format_float(mu))?;
        writeln!(w, "l = {}", format_float(l))?;
    }
    writeln!(w, "f_star = {}", format_float(reference.f_star))?;
    writeln!(w, "f_star_certified = {}", reference.certified)?;
    writeln!(w, "reference_grad_tol = {:e}", reference_tol(p.loss()))?;
    writeln!(w, "config_hash = {:016x}", cfg.config_hash())?;
    writeln!(w, "base_seed = {}", cfg.base_seed)?;
    writeln!(w, "repetitions = {}", cfg.repetitions)?;
    writeln!(w, "pass_budget = {}", cfg.pass_budget)?;
    let diverged_total = results.iter().filter(|r| r.diverged).count();
    writeln!(w, "divergence_warnings = {diverged_total}")?;
    for a in algorithms {
        writeln!(w, "algorithm.{}.outer_iters = {}", a.label, a.outer_iters)?;
        writeln!(w, "algorithm.{}.excluded_runs = {}", a.label, a.excluded_runs)?;
    }
    for r in results {
        writeln!(w, "run.{}.rep{}.seed = {}", r.label, r.rep, r.seed)?;
        writeln!(w, "run.{}.rep{}.excluded = {}", r.label, r.rep, r.diverged)?;
    }
    w.flush()?;
    Ok(())
}

/// Norm of the minimum-norm element of the subdifferential of
/// f(x) + weight * ||x||_1 at `x`: zero exactly at a composite optimum.
pub fn l1_subgradient_residual(p: &ErmProblem, x: &ParamVector, weight: f64) -> f64 {
    let g = p.full_grad(x);
    let mut acc = 0.0f64;
    for (gi, xi) in g.as_slice().iter().zip(x.as_slice()) {
        let r = if *xi != 0.0 {
            gi + weight * xi.signum()
        } else {
            (gi.abs() - weight).max(0.0)
        };
        acc += r * r;
    }
    acc.sqrt()
}

/// Prints the per-algorithm summary table to stdout.
pub fn print_summary(s: &ExperimentSummary) {
    println!(
        "problem {} (n = {}, d = {}), f* = {:.6e}{}",
        s.problem_name,
        s.n,
        s.d,
        s.f_star,
        if s.f_star_certified {
            ""
        } else {
            " (uncertified)"
        }
    );
    println!("{:<10} {:>12} {:>14} {:>9}", "algorithm", "passes", "mean subopt", "excluded");
    for a in &s.algorithms {
        println!(
            "{:<10} {:>12.1} {:>14.4e} {:>9}",
            a.label, a.total_passes, a.final_mean_suboptimality, a.excluded_runs
        );
    }
}

/// Runs each rate in `grid` for `outer_iters` outer iterations with one
/// fixed seed and returns the rate with the smallest final objective
/// value. Divergent rates are excluded; ties break toward the smaller
/// rate. Errors when every rate diverges, listing per-rate outcomes.
pub fn grid_search_rate(
    p: &ErmProblem,
    template: &AlgorithmSpec,
    m: usize,
    b: usize,
    grid: &[f64],
    outer_iters: usize,
    seed: u64,
) -> Result<f64> {
    if grid.is_empty() || grid.iter().any(|&e| !(e > 0.0)) {
        bail!("grid must be a nonempty list of positive rates");
    }
    let mut rates: Vec<f64> = grid.to_vec();
    rates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let x0 = ParamVector::zeros(p.d());
    let outcomes: Vec<(f64, Option<f64>)> = rates
        .par_iter()
        .map(|&eta| {
            let mut sc = StochOptConfig::new(template.algorithm, m, b, outer_iters, seed);
            sc.fixed_eta = Some(eta);
            sc.prox = template.prox;
            match run(p, &sc, &x0) {
                Ok(t) => {
                    let f = t.final_value();
                    (eta, f.is_finite().then_some(f))
                }
                Err(_) => (eta, None),
            }
        })
        .collect();
    let mut best: Option<(f64, f64)> = None;
    for &(eta, outcome) in &outcomes {
        if let Some(f) = outcome {
            // Strict improvement only: ascending order keeps the smaller
            // rate on ties.
            if best.map(|(_, bf)| f < bf).unwrap_or(true) {
                best = Some((eta, f));
            }
        }
    }
    match best {
        Some((eta, _)) => Ok(eta),
        None => {
            let detail: Vec<String> = outcomes
                .iter()
                .map(|(eta, o)| match o {
                    Some(f) => format!("{eta:e} -> {f:e}"),
                    None => format!("{eta:e} -> diverged"),
                })
                .collect();
            bail!("all rates diverged: {}", detail.join(", "))
        }
    }
}
