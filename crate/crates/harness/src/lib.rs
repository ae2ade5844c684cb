//! Host generators, reproducible experiments and result documents for the
//! Maker-Breaker engine in `mb-core`.

mod error;
pub mod experiment;
pub mod generate;
pub mod registry;

pub use error::{HarnessError, Result};
pub use experiment::{
    prepare, run_experiment, run_experiment_with, sweep_bias, sweep_table, write_atomic, Aggregate, ExperimentConfig,
    Prepared, ResultDocument, TrialRow, SCHEMA,
};
pub use generate::{generate, Family, Generated};
