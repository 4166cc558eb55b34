//! Benchmark harness for the `steffensen` crate: experiment configs and
//! presets, the seeded experiment driver with CSV/manifest output, and the
//! fixed-rate grid search used to tune baselines.

pub mod config;
pub mod experiment;
