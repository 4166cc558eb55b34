use thiserror::Error;

/// Errors produced by the library's fallible operations.
///
/// Contract violations (dimension mismatches, invalid indices) panic instead;
/// they indicate caller bugs, not runtime conditions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("rate rule needs previous iterate/gradient history")]
    NeedsHistory,

    #[error("degenerate curvature: |s'y| vanishes relative to ||s||^2")]
    DegenerateCurvature,

    #[error("degenerate learning-rate denominator")]
    DegenerateDenominator,

    #[error("gradient is zero: already at a stationary point")]
    ZeroGradient,

    #[error("empty minibatch")]
    EmptyMinibatch,

    #[error("minibatch size {b} exceeds sample count {n}")]
    BatchTooLarge { b: usize, n: usize },

    #[error("insufficient admissible iterates for order estimation")]
    InsufficientData,

    #[error("iteration diverged (non-finite value or unbounded iterate)")]
    Diverged,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("all candidate rates diverged: {0}")]
    AllRatesDiverged(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
