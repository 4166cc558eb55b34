//! Closed-form proximal maps for the nonsmooth variant.
//!
//! Only separable regularizers with exact proxes are included: zero, l1
//! (soft thresholding), squared l2 (shrinkage) and elastic net (both).

use crate::linalg::ParamVector;

/// Specification of the regularizer R whose prox is applied each inner step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProxSpec {
    Zero,
    L1 { weight: f64 },
    SquaredL2 { weight: f64 },
    ElasticNet { l1: f64, l2: f64 },
}

impl ProxSpec {
    /// Strong-convexity modulus of R: 0 for Zero/L1, the l2 weight otherwise.
    pub fn mu_r(&self) -> f64 {
        match *self {
            ProxSpec::Zero | ProxSpec::L1 { .. } => 0.0,
            ProxSpec::SquaredL2 { weight } => weight,
            ProxSpec::ElasticNet { l2, .. } => l2,
        }
    }

    pub fn validate(&self) -> bool {
        match *self {
            ProxSpec::Zero => true,
            ProxSpec::L1 { weight } => weight >= 0.0,
            ProxSpec::SquaredL2 { weight } => weight >= 0.0,
            ProxSpec::ElasticNet { l1, l2 } => l1 >= 0.0 && l2 >= 0.0,
        }
    }

    /// R(x), used by objective reporting for prox runs.
    pub fn value(&self, x: &ParamVector) -> f64 {
        match *self {
            ProxSpec::Zero => 0.0,
            ProxSpec::L1 { weight } => weight * x.as_slice().iter().map(|v| v.abs()).sum::<f64>(),
            ProxSpec::SquaredL2 { weight } => {
                0.5 * weight * x.as_slice().iter().map(|v| v * v).sum::<f64>()
            }
            ProxSpec::ElasticNet { l1, l2 } => {
                l1 * x.as_slice().iter().map(|v| v.abs()).sum::<f64>()
                    + 0.5 * l2 * x.as_slice().iter().map(|v| v * v).sum::<f64>()
            }
        }
    }
}

fn soft_threshold(v: f64, t: f64) -> f64 {
    v.signum() * (v.abs() - t).max(0.0)
}

/// prox_{eta R}(y) = argmin_x { ||x - y||^2 / 2 + eta R(x) }.
pub fn prox_map(spec: &ProxSpec, eta: f64, y: &ParamVector) -> ParamVector {
    assert!(eta > 0.0, "prox_map: eta must be positive");
    let out: Vec<f64> = match *spec {
        ProxSpec::Zero => return y.clone(),
        ProxSpec::L1 { weight } => y
            .as_slice()
            .iter()
            .map(|&v| soft_threshold(v, eta * weight))
            .collect(),
        ProxSpec::SquaredL2 { weight } => y
            .as_slice()
            .iter()
            .map(|&v| v / (1.0 + eta * weight))
            .collect(),
        ProxSpec::ElasticNet { l1, l2 } => y
            .as_slice()
            .iter()
            .map(|&v| soft_threshold(v, eta * l1) / (1.0 + eta * l2))
            .collect(),
    };
    ParamVector::new(out)
}
