//! Steffensen-type first-order optimization.
//!
//! The crate provides:
//! - univariate Steffensen iterations, with and without a Barzilai--Borwein
//!   step size, and empirical convergence-order estimation ([`univariate`]);
//! - the four multivariate Steffensen learning rates ([`rates`]);
//! - full-gradient optimizers driven by those rates ([`deterministic`]);
//! - the stochastic algorithms SSM, SSBB, SVRG, SVRG-BB, SGD, SGD-BB and
//!   prox-SSBB on finite-sum objectives ([`stochastic`]);
//! - closed-form proximal maps ([`prox`]);
//! - cyclic/randomized Kaczmarz and its equivalence with single-sample
//!   stochastic Steffensen on quadratics ([`kaczmarz`]);
//! - LIBSVM parsing, synthetic data generation and CSV trace output ([`data`]).
//!
//! All randomness flows through the SplitMix64 generator in [`rng`], so
//! every run is reproducible from a 64-bit seed.

pub mod data;
pub mod deterministic;
pub mod error;
pub mod kaczmarz;
pub mod linalg;
pub mod objective;
pub mod prox;
pub mod rates;
pub mod rng;
pub mod stochastic;
pub mod univariate;

pub use error::Error;
pub use linalg::{DesignMatrix, ParamVector, SparseRow};
pub use objective::{ErmProblem, LossKind, Minibatch, Snapshot};
