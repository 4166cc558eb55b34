//! Stochastic outer/inner-loop optimizers sharing one engine: SGD and
//! SGD-BB (epoch structure only), SVRG and SVRG-BB (control-variate inner
//! steps), the stochastic Steffensen methods SSM and SSBB, and the proximal
//! SSBB variant for composite objectives.
//!
//! Gradient-evaluation accounting is in units of single-component gradient
//! evaluations: a full gradient costs n, each control-variate inner step
//! costs 2b, each plain minibatch step costs b.

use std::time::Instant;

use crate::deterministic::fallback_eta;
use crate::linalg::{dot, norm_sq, sub, ParamVector};
use crate::objective::{ErmProblem, Minibatch, Snapshot};
use crate::prox::{prox_map, ProxSpec};
use crate::rates::{learning_rate, RateContext, RateKind, SignConvention, StochasticKind};
use crate::rng::SplitMix64;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Sgd,
    SgdBb,
    Svrg,
    SvrgBb,
    Ssm,
    Ssbb,
    ProxSsbb,
}

impl Algorithm {
    /// Whether the inner loop uses control-variate (snapshot-anchored)
    /// gradients; SGD variants use plain minibatch gradients.
    pub fn variance_reduced(self) -> bool {
        !matches!(self, Algorithm::Sgd | Algorithm::SgdBb)
    }

    /// Component-gradient evaluations consumed by one outer iteration.
    pub fn evals_per_outer(self, n: usize, m: usize, b: usize) -> u64 {
        let (n, m, b) = (n as u64, m as u64, b as u64);
        match self {
            Algorithm::Sgd | Algorithm::SgdBb => b * m,
            Algorithm::Svrg | Algorithm::SvrgBb => n + 2 * b * m,
            // Full gradient, probe gradient, then m control-variate steps.
            Algorithm::Ssm | Algorithm::Ssbb | Algorithm::ProxSsbb => 2 * n + 2 * b * m,
        }
    }
}

/// Which iterate becomes the next outer point for the variance-reduced
/// algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OuterIterate {
    /// A uniformly random inner iterate x_{k,i}, i in {0, ..., m-1}.
    RandomInner,
    /// The last inner iterate x_{k,m}.
    LastInner,
}

#[derive(Debug, Clone)]
pub struct StochOptConfig {
    pub algorithm: Algorithm,
    /// Inner-loop length (steps per outer iteration).
    pub m: usize,
    /// Minibatch size.
    pub b: usize,
    /// Required by SGD, SGD-BB (warmup epochs) and SVRG; SVRG-BB uses it
    /// for the first outer iteration only.
    pub fixed_eta: Option<f64>,
    /// Composite regularizer; must be Zero except for ProxSsbb.
    pub prox: ProxSpec,
    pub outer_iters: usize,
    pub seed: u64,
    pub sign: SignConvention,
    pub outer_iterate: OuterIterate,
}

impl StochOptConfig {
    pub fn new(algorithm: Algorithm, m: usize, b: usize, outer_iters: usize, seed: u64) -> Self {
        StochOptConfig {
            algorithm,
            m,
            b,
            fixed_eta: None,
            prox: ProxSpec::Zero,
            outer_iters,
            seed,
            sign: SignConvention::Negative,
            outer_iterate: OuterIterate::RandomInner,
        }
    }

    fn validate(&self, n: usize) -> Result<(), Error> {
        if self.m == 0 {
            return Err(Error::InvalidConfig("m must be positive".into()));
        }
        if self.b == 0 {
            return Err(Error::EmptyMinibatch);
        }
        if self.b > n {
            return Err(Error::BatchTooLarge { b: self.b, n });
        }
        let needs_eta = matches!(
            self.algorithm,
            Algorithm::Sgd | Algorithm::SgdBb | Algorithm::Svrg | Algorithm::SvrgBb
        );
        match self.fixed_eta {
            Some(eta) if eta <= 0.0 || !eta.is_finite() => {
                return Err(Error::InvalidConfig(format!("fixed_eta = {eta}")));
            }
            None if needs_eta => {
                return Err(Error::InvalidConfig(format!(
                    "{:?} requires fixed_eta",
                    self.algorithm
                )));
            }
            _ => {}
        }
        if !self.prox.validate() {
            return Err(Error::InvalidConfig("negative regularizer weight".into()));
        }
        if self.prox != ProxSpec::Zero && self.algorithm != Algorithm::ProxSsbb {
            return Err(Error::InvalidConfig(
                "nonzero prox requires the ProxSsbb algorithm".into(),
            ));
        }
        Ok(())
    }
}

/// One row of the outer-iteration log. Record 0 is the initial state with
/// eta = 0 and no evaluations; record k >= 1 follows outer iteration k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StochRecord {
    pub outer_iter: usize,
    /// f(x) plus the regularizer value for prox runs.
    pub f_value: f64,
    pub eta: f64,
    pub grad_evals: u64,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, Default)]
pub struct StochTrace {
    pub records: Vec<StochRecord>,
    pub final_point: ParamVector,
}

impl StochTrace {
    pub fn final_value(&self) -> f64 {
        self.records.last().expect("empty trace").f_value
    }
}

/// Uniform minibatch sampler: a partial Fisher-Yates shuffle over a
/// persistent scratch permutation, undone after each draw so every draw
/// sees the identity permutation and depends only on the RNG state.
#[derive(Debug, Clone)]
pub struct SamplerState {
    rng: SplitMix64,
    perm: Vec<usize>,
    swaps: Vec<(usize, usize)>,
}

impl SamplerState {
    pub fn new(seed: u64, n: usize) -> Self {
        SamplerState {
            rng: SplitMix64::new(seed),
            perm: (0..n).collect(),
            swaps: Vec::new(),
        }
    }

    pub fn rng_mut(&mut self) -> &mut SplitMix64 {
        &mut self.rng
    }

    /// Draws a uniformly random b-element subset of {0, ..., n-1}.
    pub fn sample_minibatch(&mut self, b: usize) -> Minibatch {
        let n = self.perm.len();
        assert!(b >= 1 && b <= n, "sample_minibatch: b = {b}, n = {n}");
        self.swaps.clear();
        for t in 0..b {
            let j = t + self.rng.next_below((n - t) as u64) as usize;
            self.perm.swap(t, j);
            self.swaps.push((t, j));
        }
        let indices = self.perm[..b].to_vec();
        for &(t, j) in self.swaps.iter().rev() {
            self.perm.swap(t, j);
        }
        Minibatch::new(indices, n).expect("sampler produced invalid minibatch")
    }
}

const DIVERGENCE_NORM: f64 = 1e12;

/// Runs the configured stochastic algorithm from `x0`. On divergence the
/// partial trace is returned alongside the error.
pub fn run(
    p: &ErmProblem,
    cfg: &StochOptConfig,
    x0: &ParamVector,
) -> Result<StochTrace, (Error, StochTrace)> {
    assert_eq!(x0.dim(), p.d(), "run: dimension mismatch");
    if let Err(e) = cfg.validate(p.n()) {
        return Err((e, StochTrace::default()));
    }
    let start = Instant::now();
    let mut sampler = SamplerState::new(cfg.seed, p.n());
    let mut trace = StochTrace {
        records: Vec::with_capacity(cfg.outer_iters + 1),
        final_point: x0.clone(),
    };
    let mut x = x0.clone();
    let mut evals: u64 = 0;
    let objective = |pt: &ParamVector| p.value(pt) + cfg.prox.value(pt);
    trace.records.push(StochRecord {
        outer_iter: 0,
        f_value: objective(&x),
        eta: 0.0,
        grad_evals: 0,
        wall_seconds: start.elapsed().as_secs_f64(),
    });

    // Outer-iteration history for the BB-based step sizes.
    let mut prev_outer: Option<(ParamVector, ParamVector)> = None; // (x_k, g_k)
    let mut prev_epoch_avg: Option<ParamVector> = None; // SGD-BB only
    let mut prev_x_epoch: Option<ParamVector> = None;
    let mut prev_eta: Option<f64> = None;
    let mut prev_beta: Option<f64> = None;

    for k in 0..cfg.outer_iters {
        let eta;
        if cfg.algorithm.variance_reduced() {
            let g = p.full_grad(&x);
            evals += p.n() as u64;
            eta = match cfg.algorithm {
                Algorithm::Svrg => cfg.fixed_eta.unwrap(),
                Algorithm::SvrgBb => {
                    // eta_k = ||s||^2 / (m s'y) over outer snapshots.
                    match &prev_outer {
                        Some((xp, gp)) => {
                            let s = sub(&x, xp);
                            let y = sub(&g, gp);
                            let sy = dot(&s, &y);
                            if sy.abs() < 1e-300 * norm_sq(&s).max(1e-300) {
                                prev_eta.unwrap_or(cfg.fixed_eta.unwrap())
                            } else {
                                norm_sq(&s) / (cfg.m as f64 * sy)
                            }
                        }
                        None => cfg.fixed_eta.unwrap(),
                    }
                }
                Algorithm::Ssm => {
                    evals += p.n() as u64;
                    let ctx = RateContext {
                        x_curr: &x,
                        x_prev: None,
                        grad_curr: &g,
                        grad_prev: None,
                    };
                    let coeff =
                        crate::rates::stochastic_coefficient(StochasticKind::Ssm, cfg.m, cfg.b);
                    match learning_rate(RateKind::Steffensen, &ctx, |pt| p.full_grad(pt), 1.0) {
                        Ok((core, _)) => coeff * core,
                        Err(Error::ZeroGradient) => break,
                        Err(_) => fallback_eta(p, prev_eta),
                    }
                }
                Algorithm::Ssbb | Algorithm::ProxSsbb => {
                    evals += p.n() as u64;
                    let beta = match &prev_outer {
                        Some((xp, gp)) => {
                            let ctx = RateContext {
                                x_curr: &x,
                                x_prev: Some(xp),
                                grad_curr: &g,
                                grad_prev: Some(gp),
                            };
                            match crate::rates::bb_step_size(&ctx, cfg.sign) {
                                Ok(b) => b,
                                Err(_) => prev_beta.unwrap_or(-1.0),
                            }
                        }
                        None => match cfg.sign {
                            SignConvention::Negative => -1.0,
                            SignConvention::Positive => 1.0,
                        },
                    };
                    prev_beta = Some(beta);
                    let ctx = RateContext {
                        x_curr: &x,
                        x_prev: None,
                        grad_curr: &g,
                        grad_prev: None,
                    };
                    let coeff =
                        crate::rates::stochastic_coefficient(StochasticKind::Ssbb, cfg.m, cfg.b);
                    match learning_rate(RateKind::SteffensenBB, &ctx, |pt| p.full_grad(pt), beta) {
                        Ok((core, _)) => coeff * core,
                        Err(Error::ZeroGradient) => break,
                        Err(_) => fallback_eta(p, prev_eta),
                    }
                }
                Algorithm::Sgd | Algorithm::SgdBb => unreachable!(),
            };
            prev_eta = Some(eta);
            let snap = Snapshot {
                point: x.clone(),
                full_grad: g.clone(),
            };
            prev_outer = Some((snap.point.clone(), snap.full_grad.clone()));
            // Selection index is drawn before the inner loop so the RNG
            // stream per outer iteration is fixed regardless of the flag.
            let sel = match cfg.outer_iterate {
                OuterIterate::RandomInner => {
                    Some(sampler.rng_mut().next_below(cfg.m as u64) as usize)
                }
                OuterIterate::LastInner => None,
            };
            let mut inner = x.clone();
            let mut chosen: Option<ParamVector> = None;
            for t in 0..cfg.m {
                if sel == Some(t) {
                    chosen = Some(inner.clone());
                }
                let s = sampler.sample_minibatch(cfg.b);
                let v = p.variance_reduced_grad(&s, &inner, &snap);
                evals += 2 * cfg.b as u64;
                inner.axpy_in_place(-eta, &v);
                if cfg.algorithm == Algorithm::ProxSsbb {
                    inner = prox_map(&cfg.prox, eta, &inner);
                }
            }
            x = chosen.unwrap_or(inner);
        } else {
            // SGD family: one outer iteration is an epoch of m plain
            // minibatch steps; the epoch iterate is the last inner iterate.
            eta = match cfg.algorithm {
                Algorithm::Sgd => cfg.fixed_eta.unwrap(),
                Algorithm::SgdBb => {
                    // eta_k = ||s||^2 / (m |s'(gbar_k - gbar_{k-1})|) with
                    // gbar the mean of the minibatch gradients of an epoch;
                    // needs two completed epochs, so warm up on fixed_eta.
                    match (&prev_x_epoch, &prev_epoch_avg, &prev_outer) {
                        (Some(xp), Some(avg_prev), Some((_, avg_prev2))) => {
                            let s = sub(&x, xp);
                            let y = sub(avg_prev, avg_prev2);
                            let sy = dot(&s, &y).abs();
                            if sy < 1e-300 * norm_sq(&s).max(1e-300) {
                                prev_eta.unwrap_or(cfg.fixed_eta.unwrap())
                            } else {
                                norm_sq(&s) / (cfg.m as f64 * sy)
                            }
                        }
                        _ => cfg.fixed_eta.unwrap(),
                    }
                }
                _ => unreachable!(),
            };
            prev_eta = Some(eta);
            let x_epoch_start = x.clone();
            let mut avg = ParamVector::zeros(p.d());
            for t in 0..cfg.m {
                let s = sampler.sample_minibatch(cfg.b);
                let g = p.minibatch_grad(&s, &x);
                evals += cfg.b as u64;
                // Running mean: avg += (g - avg) / (t + 1).
                let mut delta = g.clone();
                delta.axpy_in_place(-1.0, &avg);
                avg.axpy_in_place(1.0 / (t as f64 + 1.0), &delta);
                x.axpy_in_place(-eta, &g);
            }
            // Shift epoch history: prev_outer's second slot stores the
            // average from the epoch before last for the BB difference.
            prev_outer = Some((
                x_epoch_start.clone(),
                prev_epoch_avg.take().unwrap_or_else(|| avg.clone()),
            ));
            prev_epoch_avg = Some(avg);
            prev_x_epoch = Some(x_epoch_start);
        }

        let f = objective(&x);
        trace.records.push(StochRecord {
            outer_iter: k + 1,
            f_value: f,
            eta,
            grad_evals: evals,
            wall_seconds: start.elapsed().as_secs_f64(),
        });
        trace.final_point = x.clone();
        if !f.is_finite() || norm_sq(&x).sqrt() > DIVERGENCE_NORM {
            return Err((Error::Diverged, trace));
        }
    }
    trace.final_point = x;
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{DesignMatrix, SparseRow};
    use crate::objective::LossKind;

    fn random_ridge(n: usize, d: usize, lambda: f64, seed: u64) -> ErmProblem {
        let mut rng = SplitMix64::new(seed);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..n {
            let dense: Vec<f64> = (0..d).map(|_| 2.0 * rng.next_f64() - 1.0).collect();
            rows.push(SparseRow::from_dense(&dense));
            labels.push(2.0 * rng.next_f64() - 1.0);
        }
        ErmProblem::new(
            DesignMatrix::new(rows, labels, d).unwrap(),
            LossKind::SquaredLoss,
            lambda,
        )
    }

    fn identity_quadratic(n: usize) -> ErmProblem {
        // f = ||x||^2 / (2n): Hessian is I/n, so the Steffensen core rate
        // is exactly n.
        let rows = (0..n)
            .map(|i| SparseRow::new(vec![i], vec![1.0], n).unwrap())
            .collect();
        ErmProblem::new(
            DesignMatrix::new(rows, vec![0.0; n], n).unwrap(),
            LossKind::SquaredLoss,
            0.0,
        )
    }

    #[test]
    fn sampler_is_uniform_over_elements() {
        let n = 10;
        let b = 3;
        let mut sampler = SamplerState::new(77, n);
        let trials = 60_000;
        let mut counts = vec![0usize; n];
        for _ in 0..trials {
            let s = sampler.sample_minibatch(b);
            assert_eq!(s.size(), b);
            for &i in s.indices() {
                counts[i] += 1;
            }
        }
        // Each element appears with probability b/n; 4-sigma band.
        let p = b as f64 / n as f64;
        let sigma = (p * (1.0 - p) * trials as f64).sqrt();
        for (i, &c) in counts.iter().enumerate() {
            let expect = p * trials as f64;
            assert!(
                (c as f64 - expect).abs() < 4.0 * sigma,
                "element {i}: {c} vs {expect}"
            );
        }
    }

    #[test]
    fn sampler_scratch_is_restored() {
        let mut sampler = SamplerState::new(5, 8);
        let _ = sampler.sample_minibatch(5);
        assert_eq!(sampler.perm, (0..8).collect::<Vec<_>>());
        let first = sampler.sample_minibatch(8);
        assert_eq!(
            {
                let mut v = first.indices().to_vec();
                v.sort_unstable();
                v
            },
            (0..8).collect::<Vec<_>>()
        );
    }

    #[test]
    fn runs_are_bit_identical_per_seed() {
        let p = random_ridge(24, 5, 1e-3, 10);
        for alg in [
            Algorithm::Sgd,
            Algorithm::SgdBb,
            Algorithm::Svrg,
            Algorithm::SvrgBb,
            Algorithm::Ssm,
            Algorithm::Ssbb,
        ] {
            let mut cfg = StochOptConfig::new(alg, 12, 3, 4, 42);
            cfg.fixed_eta = Some(0.05);
            let x0 = ParamVector::zeros(5);
            let a = run(&p, &cfg, &x0).unwrap();
            let b = run(&p, &cfg, &x0).unwrap();
            assert_eq!(a.final_point, b.final_point, "{alg:?}");
            assert_eq!(a.records.len(), b.records.len());
            for (ra, rb) in a.records.iter().zip(&b.records) {
                assert_eq!(ra.f_value, rb.f_value);
                assert_eq!(ra.eta, rb.eta);
                assert_eq!(ra.grad_evals, rb.grad_evals);
            }
            let mut cfg2 = cfg.clone();
            cfg2.seed = 43;
            let c = run(&p, &cfg2, &x0).unwrap();
            assert_ne!(a.final_point, c.final_point, "{alg:?} ignores seed");
        }
    }

    #[test]
    fn eval_accounting_is_hand_countable() {
        let p = random_ridge(20, 4, 1e-3, 2);
        let (n, m, b) = (20u64, 10usize, 4usize);
        for (alg, per_outer) in [
            (Algorithm::Sgd, b as u64 * m as u64),
            (Algorithm::Svrg, n + 2 * b as u64 * m as u64),
            (Algorithm::Ssbb, 2 * n + 2 * b as u64 * m as u64),
            (Algorithm::Ssm, 2 * n + 2 * b as u64 * m as u64),
        ] {
            let mut cfg = StochOptConfig::new(alg, m, b, 2, 7);
            cfg.fixed_eta = Some(0.05);
            let t = run(&p, &cfg, &ParamVector::zeros(4)).unwrap();
            assert_eq!(t.records[0].grad_evals, 0);
            assert_eq!(t.records[1].grad_evals, per_outer, "{alg:?}");
            assert_eq!(t.records[2].grad_evals, 2 * per_outer, "{alg:?}");
        }
    }

    #[test]
    fn ssbb_rate_on_identity_quadratic() {
        // Hessian I/n: core SteffensenBB rate is n for any beta, so the
        // first outer eta is (b/m) * n.
        let n = 12;
        let p = identity_quadratic(n);
        let (m, b) = (6usize, 2usize);
        let cfg = StochOptConfig::new(Algorithm::Ssbb, m, b, 1, 3);
        let x0 = ParamVector::new((0..n).map(|i| 1.0 + i as f64).collect());
        let t = run(&p, &cfg, &x0).unwrap();
        let expect = b as f64 / m as f64 * n as f64;
        assert!(
            (t.records[1].eta - expect).abs() < 1e-12 * expect,
            "{} vs {expect}",
            t.records[1].eta
        );
    }

    #[test]
    fn ssm_rate_uses_inverse_sqrt_m() {
        let n = 9;
        let p = identity_quadratic(n);
        let m = 16usize;
        let cfg = StochOptConfig::new(Algorithm::Ssm, m, 1, 1, 3);
        let x0 = ParamVector::new((0..n).map(|i| 0.5 + i as f64).collect());
        let t = run(&p, &cfg, &x0).unwrap();
        let expect = n as f64 / (m as f64).sqrt();
        assert!((t.records[1].eta - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn prox_zero_matches_plain_ssbb_bitwise() {
        let p = random_ridge(18, 4, 1e-2, 8);
        let cfg_plain = StochOptConfig::new(Algorithm::Ssbb, 9, 2, 5, 21);
        let mut cfg_prox = StochOptConfig::new(Algorithm::ProxSsbb, 9, 2, 5, 21);
        cfg_prox.prox = ProxSpec::Zero;
        let x0 = ParamVector::zeros(4);
        let a = run(&p, &cfg_plain, &x0).unwrap();
        let b = run(&p, &cfg_prox, &x0).unwrap();
        assert_eq!(a.final_point, b.final_point);
        for (ra, rb) in a.records.iter().zip(&b.records) {
            assert_eq!(ra.f_value, rb.f_value);
        }
    }

    #[test]
    fn prox_l1_produces_sparse_iterates() {
        let p = random_ridge(30, 8, 0.0, 14);
        let mut cfg = StochOptConfig::new(Algorithm::ProxSsbb, 30, 2, 12, 5);
        cfg.prox = ProxSpec::L1 { weight: 0.3 };
        let x0 = ParamVector::zeros(8);
        let t = run(&p, &cfg, &x0).unwrap();
        let zeros = t
            .final_point
            .as_slice()
            .iter()
            .filter(|&&v| v == 0.0)
            .count();
        assert!(zeros > 0, "strong l1 weight should zero some coordinates");
        // Composite objective should improve from the start value.
        assert!(t.final_value() <= t.records[0].f_value);
    }

    #[test]
    fn variance_reduced_methods_descend_on_ridge() {
        let p = random_ridge(60, 6, 1e-3, 33);
        for alg in [Algorithm::Svrg, Algorithm::SvrgBb, Algorithm::Ssm, Algorithm::Ssbb] {
            let mut cfg = StochOptConfig::new(alg, 120, 4, 8, 9);
            cfg.fixed_eta = Some(0.1);
            let t = run(&p, &cfg, &ParamVector::zeros(6)).unwrap();
            let f0 = t.records[0].f_value;
            let fk = t.final_value();
            assert!(fk < f0, "{alg:?}: {fk} vs {f0}");
        }
    }

    #[test]
    fn last_inner_flag_changes_only_selection() {
        let p = random_ridge(20, 4, 1e-3, 6);
        let mut a = StochOptConfig::new(Algorithm::Ssbb, 10, 2, 3, 4);
        a.outer_iterate = OuterIterate::LastInner;
        let t = run(&p, &a, &ParamVector::zeros(4)).unwrap();
        assert_eq!(t.records.len(), 4);
        assert!(t.final_value().is_finite());
    }

    #[test]
    fn config_validation_errors() {
        let p = random_ridge(10, 3, 1e-3, 1);
        let x0 = ParamVector::zeros(3);
        let cfg = StochOptConfig::new(Algorithm::Svrg, 5, 2, 2, 0);
        assert!(matches!(
            run(&p, &cfg, &x0),
            Err((Error::InvalidConfig(_), _))
        ));
        let cfg = StochOptConfig::new(Algorithm::Ssbb, 5, 11, 2, 0);
        assert!(matches!(
            run(&p, &cfg, &x0),
            Err((Error::BatchTooLarge { .. }, _))
        ));
        let mut cfg = StochOptConfig::new(Algorithm::Ssbb, 5, 2, 2, 0);
        cfg.prox = ProxSpec::L1 { weight: 0.1 };
        assert!(matches!(
            run(&p, &cfg, &x0),
            Err((Error::InvalidConfig(_), _))
        ));
    }

    #[test]
    fn sgd_bb_switches_off_warmup_eta() {
        let p = random_ridge(40, 5, 1e-2, 19);
        let mut cfg = StochOptConfig::new(Algorithm::SgdBb, 40, 2, 5, 13);
        cfg.fixed_eta = Some(0.05);
        let t = run(&p, &cfg, &ParamVector::zeros(5)).unwrap();
        assert_eq!(t.records[1].eta, 0.05);
        assert_eq!(t.records[2].eta, 0.05);
        // From the third epoch two epoch averages exist.
        assert_ne!(t.records[3].eta, 0.05);
        assert!(t.records[3].eta > 0.0);
    }
}
