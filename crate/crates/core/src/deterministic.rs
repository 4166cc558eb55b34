//! Full-gradient optimizers: fixed-rate gradient descent and the four
//! Steffensen-rate iterations, plus the reference solver used to certify
//! f(x*) for suboptimality plots.

use crate::linalg::{axpy, dot, norm, norm_sq, sparse_axpy_in_place, sparse_dot, ParamVector};
use crate::objective::{ErmProblem, LossKind};
use crate::rates::{bb_step_size, learning_rate, RateContext, RateKind, SignConvention};
use crate::Error;

/// How the learning rate is chosen each iteration.
#[derive(Debug, Clone, Copy)]
pub enum RateChoice {
    /// Fixed eta > 0 (classical gradient descent).
    Fixed(f64),
    /// One of the Steffensen-family adaptive rates.
    Adaptive(RateKind),
}

#[derive(Debug, Clone, Copy)]
pub struct DetOptConfig {
    pub rate: RateChoice,
    pub grad_tol: f64,
    pub max_iter: usize,
    /// Sign convention for the BB step size in the BB-variant rates.
    pub sign: SignConvention,
}

impl DetOptConfig {
    pub fn adaptive(kind: RateKind, grad_tol: f64, max_iter: usize) -> Self {
        DetOptConfig {
            rate: RateChoice::Adaptive(kind),
            grad_tol,
            max_iter,
            sign: SignConvention::Negative,
        }
    }

    pub fn fixed(eta: f64, grad_tol: f64, max_iter: usize) -> Self {
        assert!(eta > 0.0);
        DetOptConfig {
            rate: RateChoice::Fixed(eta),
            grad_tol,
            max_iter,
            sign: SignConvention::Negative,
        }
    }
}

/// Per-iteration log of a deterministic minimization.
#[derive(Debug, Clone, Default)]
pub struct DetTrace {
    pub points: Vec<ParamVector>,
    pub values: Vec<f64>,
    pub grad_norms: Vec<f64>,
    pub etas: Vec<f64>,
}

const DIVERGENCE_NORM: f64 = 1e12;

/// Iterates x <- x - eta_k grad f(x) until the gradient norm drops below
/// `grad_tol` or `max_iter` is reached. BB-variant rates use beta_0 = -1
/// on the first iteration (no history yet). Returns `Error::Diverged` when
/// a non-finite value or an unbounded iterate appears; the caller can
/// inspect the partial trace it carries.
pub fn minimize(
    p: &ErmProblem,
    cfg: &DetOptConfig,
    x0: &ParamVector,
) -> Result<DetTrace, (Error, DetTrace)> {
    assert_eq!(x0.dim(), p.d(), "minimize: dimension mismatch");
    assert!(cfg.grad_tol > 0.0);
    let mut trace = DetTrace::default();
    let mut x = x0.clone();
    let mut prev: Option<(ParamVector, ParamVector)> = None; // (x, grad)
    let mut prev_eta: Option<f64> = None;
    let mut prev_beta: Option<f64> = None;
    for _ in 0..=cfg.max_iter {
        let f = p.value(&x);
        let g = p.full_grad(&x);
        let gn = norm(&g);
        trace.points.push(x.clone());
        trace.values.push(f);
        trace.grad_norms.push(gn);
        if !f.is_finite() || norm_sq(&x).sqrt() > DIVERGENCE_NORM {
            trace.etas.push(f64::NAN);
            return Err((Error::Diverged, trace));
        }
        if gn <= cfg.grad_tol || trace.values.len() > cfg.max_iter {
            trace.etas.push(0.0);
            return Ok(trace);
        }
        let eta = match cfg.rate {
            RateChoice::Fixed(eta) => eta,
            RateChoice::Adaptive(kind) => {
                let beta = if kind.uses_beta() {
                    let b = match &prev {
                        Some((xp, gp)) => {
                            let ctx = RateContext {
                                x_curr: &x,
                                x_prev: Some(xp),
                                grad_curr: &g,
                                grad_prev: Some(gp),
                            };
                            match bb_step_size(&ctx, cfg.sign) {
                                Ok(b) => b,
                                // Consecutive gradients coincide in floating
                                // point; keep the last usable beta.
                                Err(_) => prev_beta.unwrap_or(-1.0),
                            }
                        }
                        None => match cfg.sign {
                            SignConvention::Negative => -1.0,
                            SignConvention::Positive => 1.0,
                        },
                    };
                    prev_beta = Some(b);
                    b
                } else {
                    1.0
                };
                let ctx = RateContext {
                    x_curr: &x,
                    x_prev: prev.as_ref().map(|(xp, _)| xp),
                    grad_curr: &g,
                    grad_prev: prev.as_ref().map(|(_, gp)| gp),
                };
                match learning_rate(kind, &ctx, |pt| p.full_grad(pt), beta) {
                    Ok((eta, _)) => eta,
                    Err(Error::ZeroGradient) => {
                        trace.etas.push(0.0);
                        return Ok(trace);
                    }
                    Err(_) => fallback_eta(p, prev_eta),
                }
            }
        };
        trace.etas.push(eta);
        prev_eta = Some(eta);
        let next = axpy(-eta, &g, &x);
        prev = Some((x, g));
        x = next;
    }
    Ok(trace)
}

/// Learning rate used when a rate denominator degenerates: the previous
/// eta when one exists, else 1/L when L is known, else 1e-3.
pub(crate) fn fallback_eta(p: &ErmProblem, prev_eta: Option<f64>) -> f64 {
    prev_eta.unwrap_or_else(|| p.smoothness_l().map(|l| 1.0 / l).unwrap_or(1e-3))
}

/// A certified (or best-effort) reference optimum.
#[derive(Debug, Clone)]
pub struct ReferenceOptimum {
    pub x_star: ParamVector,
    pub f_star: f64,
    /// False when the iteration cap was hit before reaching the tolerance.
    pub certified: bool,
}

const REF_ITER_CAP: usize = 200_000;

/// Solves for x* to gradient-norm tolerance `tol`: conjugate gradients on
/// the normal equations for squared loss, Steffensen--BB full-gradient
/// descent for logistic and squared hinge.
pub fn reference_optimum(p: &ErmProblem, tol: f64) -> ReferenceOptimum {
    assert!(tol > 0.0);
    match p.loss() {
        LossKind::SquaredLoss => ridge_reference(p, tol),
        LossKind::LogisticLoss | LossKind::SquaredHinge => {
            let cfg = DetOptConfig::adaptive(RateKind::SteffensenBB, tol, REF_ITER_CAP);
            let trace = match minimize(p, &cfg, &ParamVector::zeros(p.d())) {
                Ok(t) => t,
                Err((_, t)) => t,
            };
            // Return the best point seen, not necessarily the last.
            let best = trace
                .values
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .map(|(i, _)| i)
                .unwrap();
            let certified = trace.grad_norms[best] <= tol
                || trace.grad_norms.last().map(|&g| g <= tol).unwrap_or(false);
            let idx = if trace.grad_norms.last().map(|&g| g <= tol).unwrap_or(false) {
                trace.points.len() - 1
            } else {
                best
            };
            ReferenceOptimum {
                x_star: trace.points[idx].clone(),
                f_star: trace.values[idx],
                certified,
            }
        }
    }
}

// Conjugate gradients on ((1/n) A'A + lambda I) x = (1/n) A'y.
fn ridge_reference(p: &ErmProblem, tol: f64) -> ReferenceOptimum {
    let d = p.d();
    let n = p.n() as f64;
    let mut rhs = ParamVector::zeros(d);
    for i in 0..p.n() {
        sparse_axpy_in_place(p.data().label(i) / n, p.data().row(i), &mut rhs);
    }
    let mut x = ParamVector::zeros(d);
    let mut r = rhs.clone(); // residual b - Hx with x = 0
    let mut dir = r.clone();
    let mut rs = norm_sq(&r);
    let rhs_norm = norm_sq(&rhs).sqrt().max(1e-300);
    let mut certified = rs.sqrt() <= tol * rhs_norm;
    for _ in 0..(4 * d + 100) {
        if rs.sqrt() <= tol * rhs_norm {
            certified = true;
            break;
        }
        let hd = hessian_vec(p, &dir);
        let alpha = rs / dot(&dir, &hd);
        if !alpha.is_finite() {
            break;
        }
        x.axpy_in_place(alpha, &dir);
        r.axpy_in_place(-alpha, &hd);
        let rs_new = norm_sq(&r);
        let beta = rs_new / rs;
        let mut new_dir = r.clone();
        new_dir.axpy_in_place(beta, &dir);
        dir = new_dir;
        rs = rs_new;
    }
    let f_star = p.value(&x);
    ReferenceOptimum {
        x_star: x,
        f_star,
        certified,
    }
}

fn hessian_vec(p: &ErmProblem, v: &ParamVector) -> ParamVector {
    let n = p.n() as f64;
    let mut out = ParamVector::zeros(p.d());
    for row in p.data().rows() {
        let z = sparse_dot(row, v);
        sparse_axpy_in_place(z / n, row, &mut out);
    }
    out.axpy_in_place(p.lambda(), v);
    out
}
