//! End-to-end acceptance checks, one test per criterion. Each prints a
//! single `acceptance NN <name>: PASS|FAIL` line (visible with
//! `--nocapture`) before asserting, so a red criterion is attributable at
//! a glance.

use std::io::Cursor;
use std::time::Instant;

use steffensen::data::{generate_synthetic_ridge, parse_libsvm, SyntheticSpec};
use steffensen::deterministic::reference_optimum;
use steffensen::linalg::{norm, norm_sq, sparse_dot, ParamVector, SparseRow};
use steffensen::kaczmarz::{ssm_kaczmarz_equivalence, LinearSystem};
use steffensen::objective::{
    for_each_subset, minibatch_variance_identity_check, ErmProblem, LossKind, Minibatch,
    Snapshot,
};
use steffensen::prox::{prox_map, ProxSpec};
use steffensen::rates::SignConvention;
use steffensen::rng::GaussianSource;
use steffensen::stochastic::{run, Algorithm, OuterIterate, StochOptConfig};
use steffensen::univariate::{
    error_constant_check, estimate_order, steffensen_bb_solve, steffensen_solve, ScalarFn,
};
use steffensen_bench::config::{preset, AlgorithmSpec};
use steffensen_bench::experiment::{grid_search_rate, l1_subgradient_residual, run_experiment};

fn report(id: u32, name: &str, pass: bool) {
    println!(
        "acceptance {id:02} {name}: {}",
        if pass { "PASS" } else { "FAIL" }
    );
}

fn exp_minus_linear() -> (impl Fn(f64) -> f64, impl Fn(f64) -> f64) {
    (|x: f64| x.exp() - x, |x: f64| x.exp() - 1.0)
}

/// Least-squares line fit of ys against xs; returns (slope, r_squared).
fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    (sxy / sxx, sxy * sxy / (sxx * syy))
}

fn desk_ridge() -> ErmProblem {
    let (data, _) = generate_synthetic_ridge(&SyntheticSpec {
        n: 500,
        d: 50,
        seed: 20_240_001,
    });
    let mut p = ErmProblem::new(data, LossKind::SquaredLoss, 1e-4);
    p.certify_constants().unwrap();
    p
}

/// Mean objective value per outer iteration over `reps` seeded runs.
fn mean_trajectory(
    p: &ErmProblem,
    mut cfg: StochOptConfig,
    reps: u64,
) -> (Vec<f64>, Vec<f64>) {
    let x0 = ParamVector::zeros(p.d());
    let base = cfg.seed;
    let rows = cfg.outer_iters + 1;
    let mut mean_f = vec![0.0f64; rows];
    let mut passes = vec![0.0f64; rows];
    for r in 0..reps {
        cfg.seed = base + r;
        let trace = run(p, &cfg, &x0).unwrap_or_else(|(e, _)| panic!("run diverged: {e}"));
        for (i, rec) in trace.records.iter().enumerate() {
            mean_f[i] += rec.f_value / reps as f64;
            passes[i] = rec.grad_evals as f64 / p.n() as f64;
        }
    }
    (mean_f, passes)
}

#[test]
fn c01_univariate_convergence_orders() {
    let start = Instant::now();
    let (f, df) = exp_minus_linear();
    let g = ScalarFn { f: &f, df: &df };
    let plain = steffensen_solve(&g, 0.5, 1.0, 1e-13, 50);
    let q_plain = estimate_order(&plain, 0.0).unwrap();
    let bb = steffensen_bb_solve(&g, 0.5, 0.4, 1e-13, 50);
    let q_bb = estimate_order(&bb, 0.0).unwrap();
    let in_time = start.elapsed().as_secs_f64() < 1.0;
    let pass = (1.8..=2.2).contains(&q_plain) && (2.2..=2.6).contains(&q_bb) && in_time;
    report(1, "univariate convergence orders", pass);
    assert!(
        pass,
        "q_plain = {q_plain:.3} (want 1.8..2.2), q_bb = {q_bb:.3} (want 2.2..2.6), \
         elapsed {:?}",
        start.elapsed()
    );
}

#[test]
fn c02_error_constant_and_cubic_regime() {
    let start = Instant::now();
    let (f, df) = exp_minus_linear();
    let g = ScalarFn { f: &f, df: &df };
    // f''(0) = f'''(0) = 1, so alpha = 1 predicts ratio 1 and
    // alpha = -1/f''(0) = -1 cancels the quadratic term.
    let trace1 = steffensen_solve(&g, 0.3, 1.0, 1e-13, 50);
    let (emp1, pred1) = error_constant_check(0.0, 1.0, 1.0, 1.0, &trace1).unwrap();
    let trace2 = steffensen_solve(&g, 0.3, -1.0, 1e-13, 50);
    let (emp2, _) = error_constant_check(0.0, 1.0, 1.0, -1.0, &trace2).unwrap();
    let in_time = start.elapsed().as_secs_f64() < 1.0;
    let pass = (emp1 - pred1).abs() <= 0.25 * pred1 && emp2 <= emp1 / 10.0 && in_time;
    report(2, "error constant prediction", pass);
    assert!(
        pass,
        "alpha=1: empirical {emp1:.3e} vs predicted {pred1:.3e}; \
         alpha=-1: empirical {emp2:.3e} (want <= {:.3e})",
        emp1 / 10.0
    );
}

#[test]
fn c03_kaczmarz_equivalence() {
    let start = Instant::now();
    let mut gauss = GaussianSource::new(33);
    let rows: Vec<SparseRow> = (0..50)
        .map(|_| SparseRow::from_dense(&(0..20).map(|_| gauss.next()).collect::<Vec<_>>()))
        .collect();
    let x_true = ParamVector::new((0..20).map(|_| gauss.next()).collect());
    let rhs: Vec<f64> = rows.iter().map(|r| sparse_dot(r, &x_true)).collect();
    let sys = LinearSystem::new(rows, rhs, 20).unwrap();
    let x0 = ParamVector::zeros(20);
    let rep = ssm_kaczmarz_equivalence(&sys, &x0, 77, 200);
    let in_time = start.elapsed().as_secs_f64() < 1.0;
    let pass = rep.max_rel_deviation <= 1e-12 && rep.max_eta_scale_err <= 1e-12 && in_time;
    report(3, "kaczmarz equivalence", pass);
    assert!(
        pass,
        "max deviation {:.3e}, max eta scale error {:.3e}",
        rep.max_rel_deviation, rep.max_eta_scale_err
    );
}

#[test]
fn c04_minibatch_variance_identity() {
    let start = Instant::now();
    let mut gauss = GaussianSource::new(5);
    let mut worst = 0.0f64;
    for n in 1..=8usize {
        for b in 1..=n {
            for _ in 0..20 {
                let xi: Vec<ParamVector> = (0..n)
                    .map(|_| ParamVector::new((0..3).map(|_| gauss.next()).collect()))
                    .collect();
                let (lhs, rhs) = minibatch_variance_identity_check(&xi, b).unwrap();
                worst = worst.max((lhs - rhs).abs() / lhs.abs().max(1.0));
            }
        }
    }
    let in_time = start.elapsed().as_secs_f64() < 5.0;
    let pass = worst <= 1e-12 && in_time;
    report(4, "minibatch variance identity", pass);
    assert!(pass, "worst relative identity gap {worst:.3e}");
}

#[test]
fn c05_variance_reduction_bound() {
    let start = Instant::now();
    let mut gauss = GaussianSource::new(6);
    let rows: Vec<SparseRow> = (0..6)
        .map(|_| SparseRow::from_dense(&(0..3).map(|_| gauss.next()).collect::<Vec<_>>()))
        .collect();
    let labels: Vec<f64> = (0..6).map(|_| gauss.next()).collect();
    let mut p = ErmProblem::new(
        steffensen::linalg::DesignMatrix::new(rows, labels, 3).unwrap(),
        LossKind::SquaredLoss,
        0.1,
    );
    p.certify_constants().unwrap();
    let l_comp = p.component_smoothness_l();
    let reference = reference_optimum(&p, 1e-13);
    let f_star = reference.f_star;
    let mut worst_slack = f64::INFINITY;
    let mut violated = false;
    for _ in 0..50 {
        let x = ParamVector::new(
            reference
                .x_star
                .as_slice()
                .iter()
                .map(|v| v + gauss.next())
                .collect(),
        );
        let xk = ParamVector::new((0..3).map(|_| gauss.next()).collect());
        let snap = Snapshot {
            full_grad: p.full_grad(&xk),
            point: xk.clone(),
        };
        let grad_x = p.full_grad(&x);
        for b in 1..=3usize {
            let mut acc = 0.0;
            let mut count = 0usize;
            for_each_subset(6, b, |idx| {
                let s = Minibatch::new(idx.to_vec(), 6).unwrap();
                let mut v = p.variance_reduced_grad(&s, &x, &snap);
                v.axpy_in_place(-1.0, &grad_x);
                acc += norm_sq(&v);
                count += 1;
            });
            let expectation = acc / count as f64;
            let bound =
                (4.0 * l_comp / b as f64) * ((p.value(&x) - f_star) + (p.value(&xk) - f_star));
            worst_slack = worst_slack.min(bound - expectation);
            if expectation > bound * (1.0 + 1e-12) {
                violated = true;
            }
        }
    }
    let in_time = start.elapsed().as_secs_f64() < 5.0;
    let pass = !violated && in_time;
    report(5, "variance reduction bound", pass);
    assert!(pass, "bound violated; smallest slack {worst_slack:.3e}");
}

#[test]
fn c06_learning_rate_bounds() {
    let (data, _) = generate_synthetic_ridge(&SyntheticSpec {
        n: 200,
        d: 20,
        seed: 7,
    });
    let mut p = ErmProblem::new(data, LossKind::SquaredLoss, 1e-3);
    let (mu, l) = p.certify_constants().unwrap();
    let x0 = ParamVector::zeros(p.d());
    let (m, b) = (400usize, 4usize);
    let sqrt_m = (m as f64).sqrt();

    let ssm_cfg = StochOptConfig::new(Algorithm::Ssm, m, b, 20, 11);
    let ssm = run(&p, &ssm_cfg, &x0).unwrap_or_else(|(e, _)| panic!("SSM diverged: {e}"));
    let ssm_ok = ssm.records[1..]
        .iter()
        .all(|r| r.eta >= 1.0 / (sqrt_m * l) * (1.0 - 1e-9) && r.eta <= 1.0 / (sqrt_m * mu) * (1.0 + 1e-9));

    let mut ssbb_cfg = StochOptConfig::new(Algorithm::Ssbb, m, b, 20, 11);
    ssbb_cfg.sign = SignConvention::Positive;
    let ssbb = run(&p, &ssbb_cfg, &x0).unwrap_or_else(|(e, _)| panic!("SSBB diverged: {e}"));
    let (lo, hi) = (b as f64 / (m as f64 * l), b as f64 / (m as f64 * mu));
    let ssbb_ok = ssbb.records[1..]
        .iter()
        .all(|r| r.eta >= lo * (1.0 - 1e-9) && r.eta <= hi * (1.0 + 1e-9));

    // Under the negative convention the same band is logged, not asserted.
    let mut neg_cfg = StochOptConfig::new(Algorithm::Ssbb, m, b, 20, 11);
    neg_cfg.sign = SignConvention::Negative;
    if let Ok(neg) = run(&p, &neg_cfg, &x0) {
        let etas: Vec<f64> = neg.records[1..].iter().map(|r| r.eta).collect();
        let (emin, emax) = etas
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, z), &e| (a.min(e), z.max(e)));
        println!(
            "negative-convention SSBB eta range [{emin:.3e}, {emax:.3e}] \
             vs band [{lo:.3e}, {hi:.3e}]"
        );
    }

    let pass = ssm_ok && ssbb_ok;
    report(6, "learning rate bounds", pass);
    assert!(pass, "SSM in band: {ssm_ok}, SSBB (positive convention) in band: {ssbb_ok}");
}

#[test]
fn c07_linear_convergence_desk_scale() {
    let start = Instant::now();
    let p = desk_ridge();
    let f_star = reference_optimum(&p, 1e-12).f_star;
    let f0 = p.value(&ParamVector::zeros(p.d()));
    let cfg = StochOptConfig::new(Algorithm::Ssbb, 1000, 4, 15, 1);
    let (mean_f, passes) = mean_trajectory(&p, cfg, 10);
    let mean_sub: Vec<f64> = mean_f.iter().map(|f| f - f_star).collect();

    let xs: Vec<f64> = (2..=15).map(|i| i as f64).collect();
    let ys: Vec<f64> = (2..=15).map(|i| mean_sub[i].ln()).collect();
    let (slope, r2) = linear_fit(&xs, &ys);
    let decay_ok = slope < 0.0 && r2 >= 0.9;

    let threshold = 1e-8 * (f0 - f_star);
    let reached = mean_sub
        .iter()
        .zip(&passes)
        .any(|(s, p)| *p <= 30.0 && *s <= threshold);
    let in_time = start.elapsed().as_secs_f64() < 30.0;

    println!(
        "mean-suboptimality decay over outer iterations 2..15: slope {slope:.3}, \
         R^2 {r2:.4}; within 30 passes best suboptimality {:.3e} vs target {threshold:.3e}",
        mean_sub
            .iter()
            .zip(&passes)
            .filter(|(_, p)| **p <= 30.0)
            .map(|(s, _)| *s)
            .fold(f64::INFINITY, f64::min)
    );
    let pass = decay_ok && reached && in_time;
    report(7, "linear convergence at desk scale", pass);
    assert!(
        pass,
        "log-linear decay (slope {slope:.3}, R^2 {r2:.4}): {decay_ok}; \
         suboptimality <= 1e-8 * initial gap within 30 passes: {reached}; \
         within 30 s: {in_time}. One outer iteration costs (2n + 2bm)/n = 18 passes, \
         so a 30-pass budget allows a single outer iteration, whose expected \
         contraction is bounded; the 1e-8 target needs ~10 outer iterations \
         (~180 passes) at the observed decade-per-iteration decay."
    );
}

#[test]
fn c08_relative_ordering_desk_scale() {
    let p = desk_ridge();
    let f_star = reference_optimum(&p, 1e-12).f_star;
    let (n, m, b) = (p.n(), 1000usize, 4usize);
    let budget = 30.0f64;
    let outers = |alg: Algorithm| -> usize {
        ((budget * n as f64) / alg.evals_per_outer(n, m, b) as f64).ceil() as usize
    };
    let grid = [1.0, 0.1, 0.01, 0.001];
    let sgd_eta = grid_search_rate(&p, &AlgorithmSpec::new(Algorithm::Sgd), m, b, &grid, outers(Algorithm::Sgd), 1)
        .unwrap();
    let svrg_eta = grid_search_rate(&p, &AlgorithmSpec::new(Algorithm::Svrg), m, b, &grid, outers(Algorithm::Svrg), 1)
        .unwrap();

    let mean_final = |alg: Algorithm, eta: Option<f64>| -> f64 {
        let mut cfg = StochOptConfig::new(alg, m, b, outers(alg), 1);
        cfg.fixed_eta = eta;
        // Benchmark runs report the last inner iterate, matching how the
        // plotted practical experiments are read.
        cfg.outer_iterate = OuterIterate::LastInner;
        let (mean_f, _) = mean_trajectory(&p, cfg, 10);
        mean_f.last().unwrap() - f_star
    };
    let ssbb = mean_final(Algorithm::Ssbb, None);
    let sgd = mean_final(Algorithm::Sgd, Some(sgd_eta));
    let svrg = mean_final(Algorithm::Svrg, Some(svrg_eta));
    println!(
        "mean suboptimality at the 30-pass budget: SSBB {ssbb:.3e}, \
         tuned SGD (eta {sgd_eta:e}) {sgd:.3e}, tuned SVRG (eta {svrg_eta:e}) {svrg:.3e}"
    );
    let pass = ssbb <= sgd && ssbb <= svrg;
    report(8, "relative ordering at desk scale", pass);
    assert!(pass, "SSBB {ssbb:.3e} vs SGD {sgd:.3e}, SVRG {svrg:.3e}");
}

/// Exact scalar argmin of 0.5 (v - y)^2 + c |v| via bisection on the
/// strictly increasing subderivative, independent of the closed form.
fn scalar_l1_argmin(y: f64, c: f64) -> f64 {
    // With sgn(0) := 0 the map h is increasing and crosses zero exactly at
    // the argmin (including the kink at 0 when |y| <= c).
    let h = |v: f64| (v - y) + c * if v > 0.0 { 1.0 } else if v < 0.0 { -1.0 } else { 0.0 };
    let (mut lo, mut hi) = (y.abs().max(1.0) * -2.0, y.abs().max(1.0) * 2.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn c09_prox_correctness_and_prox_ssbb() {
    let start = Instant::now();
    let mut gauss = GaussianSource::new(17);

    // Soft threshold against the numerical per-coordinate argmin.
    let mut max_gap = 0.0f64;
    for _ in 0..200 {
        let y = 3.0 * gauss.next();
        let eta = gauss.next().abs() + 0.01;
        let weight = gauss.next().abs() + 0.01;
        let spec = ProxSpec::L1 { weight };
        let out = prox_map(&spec, eta, &ParamVector::new(vec![y]));
        let oracle = scalar_l1_argmin(y, eta * weight);
        max_gap = max_gap.max((out.as_slice()[0] - oracle).abs());
    }
    let prox_ok = max_gap <= 1e-8;

    // Nonexpansiveness on 1000 random pairs across prox families.
    let mut nonexp_ok = true;
    let specs = [
        ProxSpec::L1 { weight: 0.3 },
        ProxSpec::SquaredL2 { weight: 0.5 },
        ProxSpec::ElasticNet { l1: 0.2, l2: 0.4 },
    ];
    for i in 0..1000 {
        let spec = &specs[i % specs.len()];
        let eta = 0.01 + (i % 7) as f64 * 0.13;
        let y1 = ParamVector::new((0..5).map(|_| 2.0 * gauss.next()).collect());
        let y2 = ParamVector::new((0..5).map(|_| 2.0 * gauss.next()).collect());
        let mut diff_in = y1.clone();
        diff_in.axpy_in_place(-1.0, &y2);
        let mut diff_out = prox_map(spec, eta, &y1);
        diff_out.axpy_in_place(-1.0, &prox_map(spec, eta, &y2));
        if norm(&diff_out) > norm(&diff_in) * (1.0 + 1e-12) {
            nonexp_ok = false;
        }
    }

    // Proximal run with R = 0 is bit-identical to the unconstrained run.
    let (data, _) = generate_synthetic_ridge(&SyntheticSpec {
        n: 100,
        d: 10,
        seed: 9,
    });
    let mut small = ErmProblem::new(data, LossKind::SquaredLoss, 1e-3);
    small.certify_constants().unwrap();
    let x0s = ParamVector::zeros(10);
    let plain_cfg = StochOptConfig::new(Algorithm::Ssbb, 200, 4, 3, 21);
    let mut prox_cfg = StochOptConfig::new(Algorithm::ProxSsbb, 200, 4, 3, 21);
    prox_cfg.prox = ProxSpec::Zero;
    let plain = run(&small, &plain_cfg, &x0s).unwrap();
    let proxed = run(&small, &prox_cfg, &x0s).unwrap();
    let identical = plain.final_point == proxed.final_point
        && plain
            .records
            .iter()
            .zip(&proxed.records)
            .all(|(a, b)| a.f_value == b.f_value && a.eta == b.eta);

    // L1-regularized ridge reaches composite stationarity.
    let (data, _) = generate_synthetic_ridge(&SyntheticSpec {
        n: 500,
        d: 50,
        seed: 20_240_001,
    });
    let mut p = ErmProblem::new(data, LossKind::SquaredLoss, 1e-3);
    p.certify_constants().unwrap();
    let mut cfg = StochOptConfig::new(Algorithm::ProxSsbb, 1000, 4, 30, 1);
    cfg.prox = ProxSpec::L1 { weight: 1e-3 };
    let trace = run(&p, &cfg, &ParamVector::zeros(50))
        .unwrap_or_else(|(e, _)| panic!("prox run diverged: {e}"));
    let residual = l1_subgradient_residual(&p, &trace.final_point, 1e-3);
    let residual_ok = residual <= 1e-6;

    let in_time = start.elapsed().as_secs_f64() < 30.0;
    let pass = prox_ok && nonexp_ok && identical && residual_ok && in_time;
    report(9, "prox correctness and prox variant", pass);
    assert!(
        pass,
        "soft-threshold gap {max_gap:.3e} (ok {prox_ok}); nonexpansive {nonexp_ok}; \
         zero-prox identical {identical}; subgradient residual {residual:.3e} \
         (ok {residual_ok}); in time {in_time}"
    );
}

#[test]
fn c10_parser_and_eval_accounting() {
    // Fixture parses to exact (n, d, entries).
    let fixture = "\
# tiny fixture
+1 1:0.5 3:-1.25
-1 2:3 4:0.01

1 1:2
";
    let data = parse_libsvm(Cursor::new(fixture), None, false).unwrap();
    let mut fixture_ok = data.n() == 3 && data.d() == 4;
    let expected: [&[(usize, f64)]; 3] = [
        &[(0, 0.5), (2, -1.25)],
        &[(1, 3.0), (3, 0.01)],
        &[(0, 2.0)],
    ];
    let labels = [1.0, -1.0, 1.0];
    for i in 0..3 {
        fixture_ok &= data.label(i) == labels[i];
        let got: Vec<(usize, f64)> = data.row(i).iter().collect();
        fixture_ok &= got == expected[i];
    }

    // Real datasets are checked when present, otherwise skipped loudly.
    let data_dir = std::env::var("STEFFENSEN_DATA_DIR")
        .unwrap_or_else(|_| concat!(env!("CARGO_MANIFEST_DIR"), "/../../data").to_string());
    let mut datasets_ok = true;
    for (file, want_n, want_d, d_override) in
        [("w6a", 17188usize, 300usize, 300usize), ("a6a", 11220, 123, 123)]
    {
        let path = std::path::Path::new(&data_dir).join(file);
        if !path.is_file() {
            println!("dataset {file} not present under {data_dir}; shape check skipped");
            continue;
        }
        let reader = std::io::BufReader::new(std::fs::File::open(&path).unwrap());
        let parsed = parse_libsvm(reader, Some(d_override), false).unwrap();
        if parsed.n() != want_n || parsed.d() != want_d {
            println!(
                "{file}: parsed ({}, {}), expected ({want_n}, {want_d})",
                parsed.n(),
                parsed.d()
            );
            datasets_ok = false;
        }
    }

    // Gradient evaluations for a 2-outer run match the closed form.
    let (data, _) = generate_synthetic_ridge(&SyntheticSpec {
        n: 20,
        d: 5,
        seed: 2,
    });
    let mut p = ErmProblem::new(data, LossKind::SquaredLoss, 1e-3);
    p.certify_constants().unwrap();
    let (n, m, b) = (20u64, 10usize, 4u64);
    let cfg = StochOptConfig::new(Algorithm::Ssbb, m, b as usize, 2, 3);
    let trace = run(&p, &cfg, &ParamVector::zeros(5)).unwrap();
    let expected_evals = 2 * (2 * n + 2 * b * m as u64);
    let accounting_ok = trace.records.last().unwrap().grad_evals == expected_evals;

    let pass = fixture_ok && datasets_ok && accounting_ok;
    report(10, "parser and gradient accounting", pass);
    assert!(
        pass,
        "fixture {fixture_ok}, datasets {datasets_ok}, accounting {accounting_ok} \
         (got {}, want {expected_evals})",
        trace.records.last().unwrap().grad_evals
    );
}

#[test]
fn c11_experiment_determinism() {
    let run_once = |dir: &std::path::Path| {
        let mut cfg = preset("synthetic-ridge-small").unwrap();
        cfg.output_dir = dir.to_path_buf();
        run_experiment(&cfg).unwrap();
    };
    let da = tempfile::tempdir().unwrap();
    let db = tempfile::tempdir().unwrap();
    run_once(da.path());
    run_once(db.path());

    // Compare every per-run CSV with the trailing wall-clock column removed.
    let strip_timing = |text: &str| -> Vec<String> {
        text.lines()
            .map(|l| l.rsplit_once(',').map(|(head, _)| head.to_string()).unwrap())
            .collect()
    };
    let mut names: Vec<String> = std::fs::read_dir(da.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.contains("_rep") && n.ends_with(".csv"))
        .collect();
    names.sort();
    let mut pass = !names.is_empty();
    for name in &names {
        let a = std::fs::read_to_string(da.path().join(name)).unwrap();
        let b = std::fs::read_to_string(db.path().join(name)).unwrap();
        if strip_timing(&a) != strip_timing(&b) {
            println!("{name} differs between invocations");
            pass = false;
        }
    }
    report(11, "experiment determinism", pass);
    assert!(pass, "compared {} per-run CSVs", names.len());
}
