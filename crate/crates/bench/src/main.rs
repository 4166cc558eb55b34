use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use steffensen::kaczmarz::{ssm_kaczmarz_equivalence, LinearSystem};
use steffensen::linalg::{ParamVector, SparseRow};
use steffensen::prox::ProxSpec;
use steffensen::rng::GaussianSource;
use steffensen::stochastic::Algorithm;
use steffensen::univariate::{
    error_constant_check, estimate_order, steffensen_bb_solve, steffensen_solve, ScalarFn,
};
use steffensen_bench::config::{
    parse_algorithm, parse_algorithm_list, parse_config_file, preset, AlgorithmSpec,
    ExperimentConfig,
};
use steffensen_bench::experiment::{
    grid_search_rate, l1_subgradient_residual, load_problem, print_summary, run_experiment,
};

#[derive(Parser)]
#[command(name = "steffbench", about = "Benchmark harness for Steffensen-type stochastic optimizers", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a full experiment: seeded repetitions, CSV traces, manifest.
    Run(RunArgs),
    /// Tune a fixed learning rate over a grid with one seed.
    Grid(GridArgs),
    /// Verify single-sample Steffensen steps reproduce randomized Kaczmarz.
    KaczmarzCheck(KaczmarzArgs),
    /// Demonstrate the superlinear order of the scalar solvers.
    Order,
    /// Run the proximal variant on an L1-regularized least-squares problem.
    ProxRun(ProxRunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// key = value config file; defaults come from the preset it names.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Named preset: synthetic-ridge, synthetic-ridge-small, logistic-w6a,
    /// squared-hinge-a6a.
    #[arg(long)]
    preset: Option<String>,
    /// Comma list of algorithms, each `name` or `name:eta`.
    #[arg(long)]
    algorithms: Option<String>,
    /// Base seed; repetition r uses seed + r.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    reps: Option<usize>,
    /// Fixed outer-iteration count (overrides the pass budget).
    #[arg(long)]
    outer_iters: Option<usize>,
    /// Gradient-pass budget used to size outer iterations per algorithm.
    #[arg(long)]
    passes: Option<f64>,
    /// Output directory for CSVs and the manifest.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory holding LIBSVM dataset files (or set STEFFENSEN_DATA_DIR).
    #[arg(long)]
    data_dir: Option<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, default_value = "synthetic-ridge-small")]
    preset: String,
    #[arg(long, default_value = "svrg")]
    algorithm: String,
    /// Comma list of candidate rates.
    #[arg(long)]
    grid: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    outer_iters: Option<usize>,
    #[arg(long)]
    data_dir: Option<PathBuf>,
}

#[derive(Args)]
struct KaczmarzArgs {
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[arg(long, default_value_t = 20)]
    d: usize,
    #[arg(long, default_value_t = 200)]
    steps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct ProxRunArgs {
    #[arg(long, default_value_t = 500)]
    n: usize,
    #[arg(long, default_value_t = 50)]
    d: usize,
    /// Ridge penalty (smooth part).
    #[arg(long, default_value_t = 1e-3)]
    lambda: f64,
    /// L1 penalty (nonsmooth part, handled by the proximal map).
    #[arg(long, default_value_t = 1e-3)]
    l1: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 40)]
    outer_iters: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(a) => cmd_run(a),
        Command::Grid(a) => cmd_grid(a),
        Command::KaczmarzCheck(a) => cmd_kaczmarz(a),
        Command::Order => cmd_order(),
        Command::ProxRun(a) => cmd_prox_run(a),
    }
}

fn build_config(args: &RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = match (&args.config, &args.preset) {
        (Some(path), _) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let base = path.parent().unwrap_or_else(|| std::path::Path::new("."));
            parse_config_file(&text, base)?
        }
        (None, Some(name)) => preset(name)?,
        (None, None) => bail!("pass --config or --preset"),
    };
    if let Some(list) = &args.algorithms {
        cfg.algorithms = parse_algorithm_list(list)?;
    }
    if let Some(s) = args.seed {
        cfg.base_seed = s;
    }
    if let Some(r) = args.reps {
        cfg.repetitions = r;
    }
    if args.outer_iters.is_some() {
        cfg.outer_iters = args.outer_iters;
    }
    if let Some(p) = args.passes {
        cfg.pass_budget = p;
    }
    if let Some(out) = &args.out {
        cfg.output_dir = out.clone();
    }
    if args.data_dir.is_some() {
        cfg.data_dir = args.data_dir.clone();
    }
    Ok(cfg)
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let cfg = build_config(&args)?;
    let summary = run_experiment(&cfg)?;
    print_summary(&summary);
    println!("wrote CSVs and manifest to {}", cfg.output_dir.display());
    Ok(())
}

fn cmd_grid(args: GridArgs) -> Result<()> {
    let mut cfg = preset(&args.preset)?;
    if args.data_dir.is_some() {
        cfg.data_dir = args.data_dir.clone();
    }
    let algorithm = parse_algorithm(&args.algorithm)?;
    let grid: Vec<f64> = args
        .grid
        .split(',')
        .map(|s| s.trim().parse::<f64>().context("parsing grid entry"))
        .collect::<Result<_>>()?;
    let loaded = load_problem(&cfg)?;
    let n = loaded.problem.n();
    let outer_iters = args
        .outer_iters
        .unwrap_or_else(|| cfg.outer_iters_for(algorithm, n));
    let template = AlgorithmSpec::new(algorithm);
    let best = grid_search_rate(
        &loaded.problem,
        &template,
        cfg.m_rule.resolve(n),
        cfg.b,
        &grid,
        outer_iters,
        args.seed,
    )?;
    println!("best rate for {}: {best:e}", args.algorithm);
    Ok(())
}

fn cmd_kaczmarz(args: KaczmarzArgs) -> Result<()> {
    let mut gauss = GaussianSource::new(args.seed);
    let rows: Vec<SparseRow> = (0..args.n)
        .map(|_| {
            SparseRow::from_dense(&(0..args.d).map(|_| gauss.next()).collect::<Vec<_>>())
        })
        .collect();
    let rhs: Vec<f64> = (0..args.n).map(|_| gauss.next()).collect();
    let sys = LinearSystem::new(rows, rhs, args.d).map_err(|e| anyhow::anyhow!("{e}"))?;
    let x0 = ParamVector::zeros(args.d);
    let report = ssm_kaczmarz_equivalence(&sys, &x0, args.seed.wrapping_add(1), args.steps);
    println!(
        "{} x {} system, {} steps: max trajectory deviation {:.3e}, \
         max |eta * ||a_i||^2 - 1| {:.3e}",
        args.n, args.d, args.steps, report.max_rel_deviation, report.max_eta_scale_err
    );
    let ok = report.max_rel_deviation <= 1e-12 && report.max_eta_scale_err <= 1e-12;
    println!(
        "single-sample Steffensen {} randomized Kaczmarz at 1e-12",
        if ok { "matches" } else { "DOES NOT match" }
    );
    if !ok {
        std::process::exit(1);
    }
    Ok(())
}

fn cmd_order() -> Result<()> {
    // f(x) = e^x - x: unique minimizer at 0, f''(0) = 1, f'''(0) = 1.
    let f = |x: f64| x.exp() - x;
    let df = |x: f64| x.exp() - 1.0;
    let g = ScalarFn { f: &f, df: &df };
    let plain = steffensen_solve(&g, 0.5, 1.0, 1e-13, 50);
    let bb = steffensen_bb_solve(&g, 0.5, 0.4, 1e-13, 50);
    for (name, trace, expected) in [
        ("steffensen (alpha = 1)", &plain, 2.0),
        ("steffensen-bb", &bb, 1.0 + 2f64.sqrt()),
    ] {
        print!("{name}: {} iterates", trace.iterates.len());
        match estimate_order(trace, 0.0) {
            Ok(q) => println!(", estimated order {q:.3} (expected about {expected:.3})"),
            Err(e) => println!(", order estimate unavailable: {e}"),
        }
    }
    match error_constant_check(0.0, 1.0, 1.0, 1.0, &plain) {
        Ok((emp, pred)) => println!(
            "error constant |e_k+1|/e_k^2: empirical {emp:.3e}, predicted {pred:.3e}"
        ),
        Err(e) => println!("error constant check unavailable: {e}"),
    }
    Ok(())
}

fn cmd_prox_run(args: ProxRunArgs) -> Result<()> {
    let mut cfg = preset("synthetic-ridge-small")?;
    cfg.problem = steffensen_bench::config::ProblemKind::SyntheticRidge {
        n: args.n,
        d: args.d,
        data_seed: 20_240_001,
    };
    cfg.lambda = args.lambda;
    cfg.base_seed = args.seed;
    cfg.repetitions = 1;
    cfg.outer_iters = Some(args.outer_iters);
    cfg.algorithms = vec![{
        let mut spec = AlgorithmSpec::new(Algorithm::ProxSsbb);
        spec.prox = ProxSpec::L1 { weight: args.l1 };
        spec
    }];
    if let Some(out) = &args.out {
        cfg.output_dir = out.clone();
    } else {
        cfg.output_dir = std::env::temp_dir().join("steffbench-prox-run");
    }
    let loaded = load_problem(&cfg)?;
    let summary = run_experiment(&cfg)?;
    print_summary(&summary);
    // Re-run deterministically to recover the final point for the
    // stationarity report.
    let mut sc = steffensen::stochastic::StochOptConfig::new(
        Algorithm::ProxSsbb,
        cfg.m_rule.resolve(args.n),
        cfg.b,
        args.outer_iters,
        args.seed,
    );
    sc.prox = ProxSpec::L1 { weight: args.l1 };
    let x0 = ParamVector::zeros(args.d);
    let trace = match steffensen::stochastic::run(&loaded.problem, &sc, &x0) {
        Ok(t) => t,
        Err((e, _)) => bail!("prox run failed: {e}"),
    };
    let resid = l1_subgradient_residual(&loaded.problem, &trace.final_point, args.l1);
    let zeros = trace
        .final_point
        .as_slice()
        .iter()
        .filter(|v| **v == 0.0)
        .count();
    println!(
        "final point: subgradient residual {resid:.3e}, {zeros}/{} exact zeros",
        args.d
    );
    Ok(())
}
