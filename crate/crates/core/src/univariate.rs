//! Univariate Steffensen iterations and empirical convergence-order
//! estimation.
//!
//! Minimization of f via its derivative: the Steffensen update probes the
//! derivative at x + alpha f'(x) instead of using f''. With a fixed alpha
//! the method is quadratically convergent; with the two-point secant
//! coefficient (the scalar Barzilai--Borwein step size) the order rises to
//! 1 + sqrt(2).

use crate::Error;

/// A scalar function together with its first derivative.
pub struct ScalarFn<'a> {
    pub f: &'a dyn Fn(f64) -> f64,
    pub df: &'a dyn Fn(f64) -> f64,
}

/// Why a solve stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    GradTolerance,
    MaxIter,
    DenominatorUnderflow,
}

/// Iterate log of a univariate solve; `iterates[0]` is the initial point.
#[derive(Debug, Clone)]
pub struct UnivariateTrace {
    pub iterates: Vec<(f64, f64)>,
    pub converged: bool,
    pub reason: StopReason,
}

const DENOM_FLOOR: f64 = 1e-300;

/// Outcome of a single Steffensen step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepOutcome {
    Moved(f64),
    /// f'(x) = 0: x is already stationary.
    Stationary,
    /// Probe denominator underflowed; the iterate is unchanged.
    Underflow,
}

/// One Steffensen step x - alpha f'(x)^2 / [f'(x + alpha f'(x)) - f'(x)].
pub fn steffensen_step(g: &ScalarFn, x: f64, alpha: f64) -> StepOutcome {
    assert!(alpha != 0.0, "steffensen_step: alpha must be nonzero");
    let fp = (g.df)(x);
    if fp == 0.0 {
        return StepOutcome::Stationary;
    }
    let denom = (g.df)(x + alpha * fp) - fp;
    if denom.abs() < DENOM_FLOOR {
        return StepOutcome::Underflow;
    }
    StepOutcome::Moved(x - alpha * fp * fp / denom)
}

/// Fixed-alpha Steffensen iteration until |f'| <= grad_tol or max_iter.
pub fn steffensen_solve(
    g: &ScalarFn,
    x0: f64,
    alpha: f64,
    grad_tol: f64,
    max_iter: usize,
) -> UnivariateTrace {
    assert!(grad_tol > 0.0);
    let mut iterates = vec![(x0, (g.df)(x0))];
    let mut x = x0;
    for _ in 0..max_iter {
        if iterates.last().unwrap().1.abs() <= grad_tol {
            return UnivariateTrace {
                iterates,
                converged: true,
                reason: StopReason::GradTolerance,
            };
        }
        match steffensen_step(g, x, alpha) {
            StepOutcome::Moved(next) => {
                x = next;
                iterates.push((x, (g.df)(x)));
            }
            StepOutcome::Stationary => {
                return UnivariateTrace {
                    iterates,
                    converged: true,
                    reason: StopReason::GradTolerance,
                };
            }
            StepOutcome::Underflow => {
                return UnivariateTrace {
                    iterates,
                    converged: false,
                    reason: StopReason::DenominatorUnderflow,
                };
            }
        }
    }
    let converged = iterates.last().unwrap().1.abs() <= grad_tol;
    UnivariateTrace {
        iterates,
        converged,
        reason: if converged {
            StopReason::GradTolerance
        } else {
            StopReason::MaxIter
        },
    }
}

/// Two-step Steffensen--Barzilai--Borwein iteration: each step uses
/// beta_k = -(x_k - x_{k-1}) / (f'(x_k) - f'(x_{k-1})) as the probe
/// coefficient. When consecutive derivatives coincide the previous beta is
/// reused; near convergence the iterate is already acceptable.
pub fn steffensen_bb_solve(
    g: &ScalarFn,
    x0: f64,
    x1: f64,
    grad_tol: f64,
    max_iter: usize,
) -> UnivariateTrace {
    assert!(x0 != x1, "steffensen_bb_solve: x0 and x1 must differ");
    assert!(grad_tol > 0.0);
    let mut iterates = vec![(x0, (g.df)(x0)), (x1, (g.df)(x1))];
    let mut beta = -1.0;
    for _ in 0..max_iter {
        let &(x_curr, fp_curr) = iterates.last().unwrap();
        if fp_curr.abs() <= grad_tol {
            return UnivariateTrace {
                iterates,
                converged: true,
                reason: StopReason::GradTolerance,
            };
        }
        let &(x_prev, fp_prev) = &iterates[iterates.len() - 2];
        let dfp = fp_curr - fp_prev;
        if dfp.abs() >= DENOM_FLOOR {
            beta = -(x_curr - x_prev) / dfp;
        }
        match steffensen_step(g, x_curr, beta) {
            StepOutcome::Moved(next) => {
                iterates.push((next, (g.df)(next)));
            }
            StepOutcome::Stationary => {
                return UnivariateTrace {
                    iterates,
                    converged: true,
                    reason: StopReason::GradTolerance,
                };
            }
            StepOutcome::Underflow => {
                return UnivariateTrace {
                    iterates,
                    converged: false,
                    reason: StopReason::DenominatorUnderflow,
                };
            }
        }
    }
    let converged = iterates.last().unwrap().1.abs() <= grad_tol;
    UnivariateTrace {
        iterates,
        converged,
        reason: if converged {
            StopReason::GradTolerance
        } else {
            StopReason::MaxIter
        },
    }
}

// Errors below 1e-14 are rounding-dominated; above 1e-1 the asymptotic
// regime has not set in.
const ERR_LO: f64 = 1e-14;
const ERR_HI: f64 = 1e-1;

fn admissible(e: f64) -> bool {
    let a = e.abs();
    a > ERR_LO && a < ERR_HI
}

/// Empirical convergence order log|e_{k+1}| / log|e_k| at the last index
/// where both errors lie in the admissible window (1e-14, 1e-1). Requires
/// at least 3 admissible iterates; superquadratic trajectories cross the
/// thirteen-decade window in three iterates, so demanding more would reject
/// exactly the traces the estimator exists for.
pub fn estimate_order(trace: &UnivariateTrace, x_star: f64) -> Result<f64, Error> {
    let errs: Vec<f64> = trace.iterates.iter().map(|&(x, _)| x - x_star).collect();
    let admissible_count = errs.iter().filter(|&&e| admissible(e)).count();
    if admissible_count < 3 {
        return Err(Error::InsufficientData);
    }
    let mut order = None;
    for k in 0..errs.len().saturating_sub(1) {
        if admissible(errs[k]) && admissible(errs[k + 1]) {
            order = Some(errs[k + 1].abs().ln() / errs[k].abs().ln());
        }
    }
    order.ok_or(Error::InsufficientData)
}

/// Compares the observed error-constant ratio |e_{k+1}| / e_k^2 at the last
/// admissible iterate against the asymptotic prediction
/// 0.5 |d3/d2| |1 + alpha d2|, where d2 = f''(x*), d3 = f'''(x*) are
/// supplied by the caller.
pub fn error_constant_check(
    x_star: f64,
    d2: f64,
    d3: f64,
    alpha: f64,
    trace: &UnivariateTrace,
) -> Result<(f64, f64), Error> {
    assert!(d2 != 0.0, "error_constant_check: d2 must be nonzero");
    let errs: Vec<f64> = trace.iterates.iter().map(|&(x, _)| x - x_star).collect();
    // Both errors of the ratio pair must sit in the window: once e_{k+1}
    // drops below it the numerator is rounding noise.
    let mut empirical = None;
    for k in 0..errs.len().saturating_sub(1) {
        if admissible(errs[k]) && admissible(errs[k + 1]) {
            empirical = Some(errs[k + 1].abs() / (errs[k] * errs[k]));
        }
    }
    let empirical = empirical.ok_or(Error::InsufficientData)?;
    let predicted = 0.5 * (d3 / d2).abs() * (1.0 + alpha * d2).abs();
    Ok((empirical, predicted))
}

/// Independent locator for x*: bisection on f' to ~1e-15. Used by tests so
/// the reference never comes from the method under test.
pub fn bisect_root(df: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = df(lo);
    assert!(
        (flo <= 0.0) != (df(hi) <= 0.0) || flo == 0.0,
        "bisect_root: no sign change"
    );
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = df(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
