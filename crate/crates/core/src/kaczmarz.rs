//! Randomized Kaczmarz for consistent linear systems, plus a harness that
//! checks its exact equivalence with single-sample Steffensen iterations on
//! the least-squares components f_i(x) = (a_i'x - b_i)^2 / 2.

use crate::linalg::{norm_sq, sparse_axpy_in_place, sparse_dot, ParamVector, SparseRow};
use crate::rates::{learning_rate, RateContext, RateKind};
use crate::rng::SplitMix64;
use crate::Error;

/// A linear system A x = b stored row-wise. Rows must be nonzero so the
/// Kaczmarz projection is defined for every row.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    rows: Vec<SparseRow>,
    rhs: Vec<f64>,
    d: usize,
    row_norms_sq: Vec<f64>,
}

impl LinearSystem {
    pub fn new(rows: Vec<SparseRow>, rhs: Vec<f64>, d: usize) -> Result<Self, Error> {
        if rows.len() != rhs.len() || rows.is_empty() {
            return Err(Error::InvalidConfig(format!(
                "linear system: {} rows vs {} rhs entries",
                rows.len(),
                rhs.len()
            )));
        }
        let mut row_norms_sq = Vec::with_capacity(rows.len());
        for (i, r) in rows.iter().enumerate() {
            if r.dim() != d {
                return Err(Error::InvalidConfig(format!(
                    "linear system: row {i} has dim {} != {d}",
                    r.dim()
                )));
            }
            let ns = r.norm_sq();
            if ns == 0.0 {
                return Err(Error::InvalidConfig(format!("linear system: row {i} is zero")));
            }
            row_norms_sq.push(ns);
        }
        Ok(LinearSystem {
            rows,
            rhs,
            d,
            row_norms_sq,
        })
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &SparseRow {
        &self.rows[i]
    }

    pub fn rhs(&self, i: usize) -> f64 {
        self.rhs[i]
    }

    pub fn row_norm_sq(&self, i: usize) -> f64 {
        self.row_norms_sq[i]
    }

    /// Frobenius norm squared of A.
    pub fn frobenius_sq(&self) -> f64 {
        self.row_norms_sq.iter().sum()
    }

    /// ||Ax - b||.
    pub fn residual_norm(&self, x: &ParamVector) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n() {
            let r = sparse_dot(&self.rows[i], x) - self.rhs[i];
            acc += r * r;
        }
        acc.sqrt()
    }
}

/// One Kaczmarz projection onto the hyperplane of row i:
/// x + ((b_i - a_i'x) / ||a_i||^2) a_i.
pub fn kaczmarz_step(sys: &LinearSystem, i: usize, x: &mut ParamVector) {
    assert!(i < sys.n(), "kaczmarz_step: row {i} out of range");
    assert_eq!(x.dim(), sys.d(), "kaczmarz_step: dimension mismatch");
    let r = sys.rhs[i] - sparse_dot(&sys.rows[i], x);
    sparse_axpy_in_place(r / sys.row_norms_sq[i], &sys.rows[i], x);
}

/// Draws row indices with probability ||a_i||^2 / ||A||_F^2 via inverse
/// transform sampling on the cumulative row weights.
#[derive(Debug, Clone)]
pub struct RowSampler {
    cumulative: Vec<f64>,
    rng: SplitMix64,
}

impl RowSampler {
    pub fn new(sys: &LinearSystem, seed: u64) -> Self {
        let total = sys.frobenius_sq();
        let mut cumulative = Vec::with_capacity(sys.n());
        let mut acc = 0.0;
        for i in 0..sys.n() {
            acc += sys.row_norm_sq(i) / total;
            cumulative.push(acc);
        }
        *cumulative.last_mut().unwrap() = 1.0;
        RowSampler {
            cumulative,
            rng: SplitMix64::new(seed),
        }
    }

    pub fn next_index(&mut self) -> usize {
        let u = self.rng.next_f64();
        // First index whose cumulative weight exceeds u.
        match self
            .cumulative
            .binary_search_by(|c| c.partial_cmp(&u).unwrap())
        {
            Ok(i) => i + 1,
            Err(i) => i,
        }
        .min(self.cumulative.len() - 1)
    }
}

/// Runs randomized Kaczmarz for `iters` projections, recording the residual
/// norm before each step and once after the last.
pub fn randomized_kaczmarz(
    sys: &LinearSystem,
    x0: &ParamVector,
    seed: u64,
    iters: usize,
) -> (ParamVector, Vec<f64>) {
    let mut sampler = RowSampler::new(sys, seed);
    let mut x = x0.clone();
    let mut residuals = Vec::with_capacity(iters + 1);
    for _ in 0..iters {
        residuals.push(sys.residual_norm(&x));
        let i = sampler.next_index();
        kaczmarz_step(sys, i, &mut x);
    }
    residuals.push(sys.residual_norm(&x));
    (x, residuals)
}

/// Worst-case deviations between Kaczmarz and the Steffensen single-sample
/// iterations over a shared index stream.
#[derive(Debug, Clone, Copy)]
pub struct EquivalenceReport {
    /// max over variants and iterations of ||x_variant - x_kaczmarz|| /
    /// max(1, ||x_kaczmarz||).
    pub max_rel_deviation: f64,
    /// max over variants and iterations of |eta * ||a_i||^2 - 1|.
    pub max_eta_scale_err: f64,
}

// Single-sample gradient of f_i = (a_i'x - b_i)^2 / 2.
fn component_grad(sys: &LinearSystem, i: usize, x: &ParamVector) -> ParamVector {
    let mut g = ParamVector::zeros(sys.d());
    let r = sparse_dot(sys.row(i), x) - sys.rhs(i);
    sparse_axpy_in_place(r, sys.row(i), &mut g);
    g
}

/// Runs Kaczmarz and three single-sample Steffensen variants (plain, BB
/// form with beta = -1 and with beta = +1) over one shared row-weighted
/// index stream and reports the worst deviations. The Steffensen rate on
/// f_i equals 1 / ||a_i||^2 for any nonzero beta, so both trajectories
/// should agree to rounding.
///
/// Steps whose row residual is below rounding resolution (a row sampled
/// again right after its own projection) are excluded from the eta-scale
/// report: the probe difference there is pure cancellation noise while the
/// step itself moves both methods by O(eps).
pub fn ssm_kaczmarz_equivalence(
    sys: &LinearSystem,
    x0: &ParamVector,
    seed: u64,
    iters: usize,
) -> EquivalenceReport {
    let mut sampler = RowSampler::new(sys, seed);
    let stream: Vec<usize> = (0..iters).map(|_| sampler.next_index()).collect();

    let variants: [(RateKind, f64); 3] = [
        (RateKind::Steffensen, 1.0),
        (RateKind::SteffensenBB, -1.0),
        (RateKind::SteffensenBB, 1.0),
    ];
    let mut report = EquivalenceReport {
        max_rel_deviation: 0.0,
        max_eta_scale_err: 0.0,
    };
    let mut kz = x0.clone();
    let mut xs = [x0.clone(), x0.clone(), x0.clone()];
    for &i in &stream {
        kaczmarz_step(sys, i, &mut kz);
        for (v, x) in xs.iter_mut().enumerate() {
            let (kind, beta) = variants[v];
            let g = component_grad(sys, i, x);
            let ctx = RateContext {
                x_curr: x,
                x_prev: None,
                grad_curr: &g,
                grad_prev: None,
            };
            let ax = sparse_dot(sys.row(i), x);
            // The probe difference carries absolute rounding noise of order
            // eps * |a'x|; demanding the residual sit three decades above
            // machine epsilon keeps the eta ratio accurate to 1e-12.
            let resolvable =
                (ax - sys.rhs(i)).abs() > 1e-3 * ax.abs().max(sys.rhs(i).abs()).max(1.0);
            match learning_rate(kind, &ctx, |pt| component_grad(sys, i, pt), beta) {
                Ok((eta, _)) => {
                    if resolvable {
                        let scale_err = (eta * sys.row_norm_sq(i) - 1.0).abs();
                        report.max_eta_scale_err = report.max_eta_scale_err.max(scale_err);
                    }
                    x.axpy_in_place(-eta, &g);
                }
                // Zero or denormal residual on row i: the Kaczmarz step is
                // zero (or below representable resolution) as well.
                Err(Error::ZeroGradient) | Err(Error::DegenerateDenominator) => {}
                Err(e) => panic!("unexpected rate failure: {e}"),
            }
            let mut diff = x.clone();
            diff.axpy_in_place(-1.0, &kz);
            let dev = norm_sq(&diff).sqrt() / norm_sq(&kz).sqrt().max(1.0);
            report.max_rel_deviation = report.max_rel_deviation.max(dev);
        }
    }
    report
}
