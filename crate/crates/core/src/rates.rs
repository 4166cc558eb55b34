//! The Barzilai--Borwein step size and the four Steffensen learning rates.
//!
//! Each rate costs two gradient evaluations and two inner products: the
//! gradient g at the current point and one probe gradient at x + c g, with
//! c = 1 for the one-step variants and c = beta for the BB variants. The
//! probe gradient is returned to the caller so it is never computed twice.

use crate::linalg::{axpy, dot, norm_sq, sub, ParamVector};
use crate::Error;

/// The iterate/gradient history a rate rule consumes.
pub struct RateContext<'a> {
    pub x_curr: &'a ParamVector,
    pub x_prev: Option<&'a ParamVector>,
    pub grad_curr: &'a ParamVector,
    pub grad_prev: Option<&'a ParamVector>,
}

/// Sign convention for the Barzilai--Borwein step size.
///
/// `Positive` is ||s||^2 / (s'y); `Negative` is its negation, the form the
/// stochastic SSBB pseudocode uses. On quadratics the resulting Steffensen
/// learning rates coincide because the sign cancels in the probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignConvention {
    Positive,
    Negative,
}

/// The four learning-rate variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateKind {
    Steffensen,
    QuasiSteffensen,
    SteffensenBB,
    QuasiSteffensenBB,
}

impl RateKind {
    pub fn uses_beta(self) -> bool {
        matches!(self, RateKind::SteffensenBB | RateKind::QuasiSteffensenBB)
    }
}

const DENOM_FLOOR: f64 = 1e-300;

/// Barzilai--Borwein step size from (s, y) = (x_k - x_{k-1},
/// grad_k - grad_{k-1}).
pub fn bb_step_size(ctx: &RateContext, sign: SignConvention) -> Result<f64, Error> {
    let (x_prev, grad_prev) = match (ctx.x_prev, ctx.grad_prev) {
        (Some(x), Some(g)) => (x, g),
        _ => return Err(Error::NeedsHistory),
    };
    let s = sub(ctx.x_curr, x_prev);
    let y = sub(ctx.grad_curr, grad_prev);
    let ss = norm_sq(&s);
    let sy = dot(&s, &y);
    if sy.abs() < DENOM_FLOOR * ss || ss == 0.0 {
        return Err(Error::DegenerateCurvature);
    }
    let beta = ss / sy;
    Ok(match sign {
        SignConvention::Positive => beta,
        SignConvention::Negative => -beta,
    })
}

/// Computes the learning rate for `kind` together with the probe gradient.
///
/// With g the current gradient, p the full gradient at x + c g and
/// delta = p - g:
///   Steffensen          eta = ||g||^2 / (delta'g),            c = 1
///   SteffensenBB        eta = beta ||g||^2 / (delta'g),       c = beta
///   QuasiSteffensen     eta = (delta'g) / ||delta||^2,        c = 1
///   QuasiSteffensenBB   eta = beta (delta'g) / ||delta||^2,   c = beta
///
/// The beta factor on QuasiSteffensenBB makes the univariate reduction to
/// the two-step Steffensen iteration exact (and all four rates equal 1 on
/// f = ||x||^2 / 2), mirroring the SteffensenBB form.
pub fn learning_rate(
    kind: RateKind,
    ctx: &RateContext,
    probe: impl FnOnce(&ParamVector) -> ParamVector,
    beta: f64,
) -> Result<(f64, ParamVector), Error> {
    let g = ctx.grad_curr;
    let gg = norm_sq(g);
    if gg == 0.0 {
        return Err(Error::ZeroGradient);
    }
    if kind.uses_beta() {
        assert!(beta != 0.0, "learning_rate: beta must be nonzero");
    }
    let c = if kind.uses_beta() { beta } else { 1.0 };
    let probe_point = axpy(c, g, ctx.x_curr);
    let p = probe(&probe_point);
    let delta = sub(&p, g);
    let dg = dot(&delta, g);
    let eta = match kind {
        RateKind::Steffensen => {
            if dg.abs() < DENOM_FLOOR {
                return Err(Error::DegenerateDenominator);
            }
            gg / dg
        }
        RateKind::SteffensenBB => {
            if dg.abs() < DENOM_FLOOR {
                return Err(Error::DegenerateDenominator);
            }
            beta * gg / dg
        }
        RateKind::QuasiSteffensen | RateKind::QuasiSteffensenBB => {
            let dd = norm_sq(&delta);
            if dd < DENOM_FLOOR {
                return Err(Error::DegenerateDenominator);
            }
            let base = dg / dd;
            if kind == RateKind::QuasiSteffensenBB {
                beta * base
            } else {
                base
            }
        }
    };
    Ok((eta, p))
}

/// Which stochastic outer-loop coefficient to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StochasticKind {
    Ssm,
    Ssbb,
}

/// The damping applied to the core rate once per outer loop:
/// 1/sqrt(m) for SSM, b/m for SSBB.
pub fn stochastic_coefficient(kind: StochasticKind, m: usize, b: usize) -> f64 {
    assert!(m >= 1 && b >= 1);
    match kind {
        StochasticKind::Ssm => 1.0 / (m as f64).sqrt(),
        StochasticKind::Ssbb => b as f64 / m as f64,
    }
}
