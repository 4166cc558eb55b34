//! Finite-sum empirical risk objectives and their gradient oracles.
//!
//! The objective is f(x) = (1/n) sum_i f_i(x) with
//! f_i(x) = loss(a_i'x; y_i) + (lambda/2)||x||^2; the regularizer is folded
//! into every component so the finite-sum structure is preserved exactly.
//! Four oracles are exposed: full, single-component, minibatch and
//! variance-reduced. All evaluation is sequential, so sums have a fixed
//! reduction order and runs are bit-reproducible.

use crate::linalg::{
    dot, norm_sq, sparse_axpy_in_place, sparse_dot, DesignMatrix, ParamVector, SparseRow,
};
use crate::Error;

/// The three loss kinds used in the experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossKind {
    /// 0.5 * (a'x - y)^2. The half makes the Kaczmarz equivalence exact.
    SquaredLoss,
    /// log(1 + exp(-y * a'x)) with y in {-1, +1}.
    LogisticLoss,
    /// max(0, 1 - y * a'x)^2 with y in {-1, +1}; C^1 across the kink.
    SquaredHinge,
}

impl LossKind {
    /// Loss value at margin z = a'x with label y.
    pub fn value(self, z: f64, y: f64) -> f64 {
        match self {
            LossKind::SquaredLoss => 0.5 * (z - y) * (z - y),
            LossKind::LogisticLoss => {
                // log(1 + e^{-yz}) computed stably for large |yz|.
                let t = -y * z;
                if t > 0.0 {
                    t + (-t).exp().ln_1p()
                } else {
                    t.exp().ln_1p()
                }
            }
            LossKind::SquaredHinge => {
                let m = 1.0 - y * z;
                if m > 0.0 {
                    m * m
                } else {
                    0.0
                }
            }
        }
    }

    /// Derivative of the loss with respect to z.
    pub fn deriv(self, z: f64, y: f64) -> f64 {
        match self {
            LossKind::SquaredLoss => z - y,
            LossKind::LogisticLoss => {
                let t = -y * z;
                // -y * sigmoid(-yz), stable in both tails.
                let s = if t > 0.0 {
                    1.0 / (1.0 + (-t).exp())
                } else {
                    let e = t.exp();
                    e / (1.0 + e)
                };
                -y * s
            }
            LossKind::SquaredHinge => {
                let m = 1.0 - y * z;
                if m > 0.0 {
                    -2.0 * y * m
                } else {
                    0.0
                }
            }
        }
    }
}

/// A sampled b-element subset of {0, ..., n-1} with distinct indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Minibatch {
    indices: Vec<usize>,
}

impl Minibatch {
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self, Error> {
        if indices.is_empty() {
            return Err(Error::EmptyMinibatch);
        }
        if indices.len() > n {
            return Err(Error::BatchTooLarge {
                b: indices.len(),
                n,
            });
        }
        let mut sorted = indices.clone();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidConfig(format!(
                    "minibatch: duplicate index {}",
                    w[0]
                )));
            }
        }
        if *sorted.last().unwrap() >= n {
            return Err(Error::InvalidConfig(format!(
                "minibatch: index {} out of range {n}",
                sorted.last().unwrap()
            )));
        }
        Ok(Minibatch { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn size(&self) -> usize {
        self.indices.len()
    }
}

/// Outer-loop anchor: the point and the full gradient computed there.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub point: ParamVector,
    pub full_grad: ParamVector,
}

/// Finite-sum ERM objective with optional certified curvature constants.
#[derive(Debug, Clone)]
pub struct ErmProblem {
    data: DesignMatrix,
    loss: LossKind,
    lambda: f64,
    strong_convexity_mu: Option<f64>,
    smoothness_l: Option<f64>,
}

impl ErmProblem {
    pub fn new(data: DesignMatrix, loss: LossKind, lambda: f64) -> Self {
        assert!(lambda >= 0.0, "lambda must be nonnegative");
        assert!(data.n() >= 1 && data.d() >= 1);
        ErmProblem {
            data,
            loss,
            lambda,
            strong_convexity_mu: None,
            smoothness_l: None,
        }
    }

    pub fn data(&self) -> &DesignMatrix {
        &self.data
    }

    pub fn loss(&self) -> LossKind {
        self.loss
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn n(&self) -> usize {
        self.data.n()
    }

    pub fn d(&self) -> usize {
        self.data.d()
    }

    pub fn strong_convexity_mu(&self) -> Option<f64> {
        self.strong_convexity_mu
    }

    pub fn smoothness_l(&self) -> Option<f64> {
        self.smoothness_l
    }

    pub fn set_constants(&mut self, mu: f64, l: f64) {
        assert!(mu > 0.0 && mu <= l, "need 0 < mu <= L");
        self.strong_convexity_mu = Some(mu);
        self.smoothness_l = Some(l);
    }

    /// Smoothness constant of each additive component: for squared loss
    /// max_i ||a_i||^2 + lambda, for logistic max_i ||a_i||^2 / 4 + lambda,
    /// for squared hinge 2 max_i ||a_i||^2 + lambda.
    pub fn component_smoothness_l(&self) -> f64 {
        let max_sq = self
            .data
            .rows()
            .iter()
            .map(SparseRow::norm_sq)
            .fold(0.0, f64::max);
        match self.loss {
            LossKind::SquaredLoss => max_sq + self.lambda,
            LossKind::LogisticLoss => max_sq / 4.0 + self.lambda,
            LossKind::SquaredHinge => 2.0 * max_sq + self.lambda,
        }
    }

    /// Computes and stores (mu, L) for f itself. Ridge uses the extreme
    /// eigenvalues of (1/n) A'A + lambda I via power iteration to 1e-8
    /// relative; logistic uses the standard safe bounds
    /// L = max ||a_i||^2 / 4 + lambda, mu = lambda.
    pub fn certify_constants(&mut self) -> Result<(f64, f64), Error> {
        let (mu, l) = match self.loss {
            LossKind::SquaredLoss => {
                let l = self.extreme_eigenvalue(None)?;
                let mu = l - self.extreme_eigenvalue(Some(l))?;
                (mu, l)
            }
            LossKind::LogisticLoss | LossKind::SquaredHinge => {
                if self.lambda <= 0.0 {
                    return Err(Error::InvalidConfig(
                        "mu = lambda bound needs lambda > 0".into(),
                    ));
                }
                let max_sq = self
                    .data
                    .rows()
                    .iter()
                    .map(SparseRow::norm_sq)
                    .fold(0.0, f64::max);
                let scale = match self.loss {
                    LossKind::LogisticLoss => 0.25,
                    _ => 2.0,
                };
                (self.lambda, scale * max_sq + self.lambda)
            }
        };
        if mu <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "certified mu = {mu} is not positive"
            )));
        }
        self.set_constants(mu, l);
        Ok((mu, l))
    }

    /// Hessian-vector product v -> ((1/n) A'A + lambda I) v for ridge.
    pub fn ridge_hessian_vec(&self, v: &ParamVector) -> ParamVector {
        let mut out = ParamVector::zeros(self.d());
        let n = self.n() as f64;
        for row in self.data.rows() {
            let z = sparse_dot(row, v);
            sparse_axpy_in_place(z / n, row, &mut out);
        }
        out.axpy_in_place(self.lambda, v);
        out
    }

    // Power iteration on H (shift = None) or on shift*I - H to reach the
    // opposite end of the spectrum. Relative tolerance 1e-8.
    fn extreme_eigenvalue(&self, shift: Option<f64>) -> Result<f64, Error> {
        let d = self.d();
        let mut v = ParamVector::zeros(d);
        // Fixed deterministic start with components in every coordinate.
        for i in 0..d {
            v[i] = 1.0 + (i as f64 + 1.0).sqrt().fract();
        }
        let mut lambda_prev = 0.0;
        for _ in 0..100_000 {
            let hv = self.ridge_hessian_vec(&v);
            let mut w = match shift {
                None => hv,
                Some(s) => {
                    let mut w = v.clone();
                    w.scale_in_place(s);
                    w.axpy_in_place(-1.0, &hv);
                    w
                }
            };
            let lambda = dot(&w, &v) / norm_sq(&v);
            let nw = norm_sq(&w).sqrt();
            if nw == 0.0 {
                return Ok(0.0);
            }
            w.scale_in_place(1.0 / nw);
            v = w;
            if (lambda - lambda_prev).abs() <= 1e-8 * lambda.abs().max(1e-300) {
                return Ok(lambda);
            }
            lambda_prev = lambda;
        }
        Ok(lambda_prev)
    }

    /// f(x) = (1/n) sum loss(a_i'x; y_i) + (lambda/2)||x||^2.
    pub fn value(&self, x: &ParamVector) -> f64 {
        assert_eq!(x.dim(), self.d(), "value: dimension mismatch");
        let mut acc = 0.0;
        for i in 0..self.n() {
            let z = sparse_dot(self.data.row(i), x);
            acc += self.loss.value(z, self.data.label(i));
        }
        acc / self.n() as f64 + 0.5 * self.lambda * norm_sq(x)
    }

    /// Gradient of component f_i, including the lambda * x term.
    pub fn component_grad(&self, i: usize, x: &ParamVector) -> ParamVector {
        assert!(i < self.n(), "component index {i} out of range");
        assert_eq!(x.dim(), self.d(), "component_grad: dimension mismatch");
        let mut out = ParamVector::zeros(self.d());
        let row = self.data.row(i);
        let g = self.loss.deriv(sparse_dot(row, x), self.data.label(i));
        sparse_axpy_in_place(g, row, &mut out);
        out.axpy_in_place(self.lambda, x);
        out
    }

    /// Full gradient (1/n) sum_i grad f_i(x), accumulated in index order.
    pub fn full_grad(&self, x: &ParamVector) -> ParamVector {
        assert_eq!(x.dim(), self.d(), "full_grad: dimension mismatch");
        let mut out = ParamVector::zeros(self.d());
        let n = self.n() as f64;
        for i in 0..self.n() {
            let row = self.data.row(i);
            let g = self.loss.deriv(sparse_dot(row, x), self.data.label(i));
            sparse_axpy_in_place(g / n, row, &mut out);
        }
        out.axpy_in_place(self.lambda, x);
        out
    }

    /// (1/b) sum over the minibatch of component gradients.
    pub fn minibatch_grad(&self, s: &Minibatch, x: &ParamVector) -> ParamVector {
        assert_eq!(x.dim(), self.d(), "minibatch_grad: dimension mismatch");
        let mut out = ParamVector::zeros(self.d());
        let b = s.size() as f64;
        for &i in s.indices() {
            let row = self.data.row(i);
            let g = self.loss.deriv(sparse_dot(row, x), self.data.label(i));
            sparse_axpy_in_place(g / b, row, &mut out);
        }
        out.axpy_in_place(self.lambda, x);
        out
    }

    /// SVRG-style control-variate gradient:
    /// grad f_S(x) - grad f_S(snap.point) + snap.full_grad.
    pub fn variance_reduced_grad(
        &self,
        s: &Minibatch,
        x: &ParamVector,
        snap: &Snapshot,
    ) -> ParamVector {
        assert_eq!(snap.point.dim(), x.dim(), "snapshot dimension mismatch");
        let mut out = self.minibatch_grad(s, x);
        let at_snap = self.minibatch_grad(s, &snap.point);
        out.axpy_in_place(-1.0, &at_snap);
        out.axpy_in_place(1.0, &snap.full_grad);
        out
    }
}

/// Enumerates every b-element subset of {0, ..., n-1}, calling `f` on each.
pub fn for_each_subset(n: usize, b: usize, mut f: impl FnMut(&[usize])) {
    assert!(b <= n);
    let mut idx: Vec<usize> = (0..b).collect();
    loop {
        f(&idx);
        // Advance to the next combination in lexicographic order.
        let mut i = b;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - b {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..b {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Exhaustively checks the minibatch variance identity: returns
/// (E_S ||(1/b) sum_{i in S} xi_i - mean||^2,
///  (n-b)/(b(n-1)) * E_i ||xi_i - mean||^2).
///
/// `mean` here is (1/n) sum xi_i; the identity only holds with the mean,
/// not the plain sum. Test utility: n must be small enough to enumerate.
pub fn minibatch_variance_identity_check(
    xi: &[ParamVector],
    b: usize,
) -> Result<(f64, f64), Error> {
    let n = xi.len();
    if b > n {
        return Err(Error::BatchTooLarge { b, n });
    }
    if b == 0 {
        return Err(Error::EmptyMinibatch);
    }
    if n == 1 {
        // rhs denominator n - 1 vanishes; both sides are zero by convention.
        return Ok((0.0, 0.0));
    }
    let d = xi[0].dim();
    let mut mean = ParamVector::zeros(d);
    for v in xi {
        mean.axpy_in_place(1.0 / n as f64, v);
    }
    let mut lhs_sum = 0.0;
    let mut count = 0usize;
    for_each_subset(n, b, |s| {
        let mut avg = ParamVector::zeros(d);
        for &i in s {
            avg.axpy_in_place(1.0 / b as f64, &xi[i]);
        }
        avg.axpy_in_place(-1.0, &mean);
        lhs_sum += norm_sq(&avg);
        count += 1;
    });
    let lhs = lhs_sum / count as f64;
    let mut dev = 0.0;
    for v in xi {
        let mut diff = v.clone();
        diff.axpy_in_place(-1.0, &mean);
        dev += norm_sq(&diff);
    }
    let rhs = (n - b) as f64 / (b * (n - 1)) as f64 * dev / n as f64;
    Ok((lhs, rhs))
}
