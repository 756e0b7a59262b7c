//! Synthetic problems, toy optimizers and a fixed-budget runner for
//! generating experiment data without external datasets.

pub mod optimizers;
pub mod problems;
pub mod runner;

pub use optimizers::{default_portfolio, OptimizerKind, OptimizerSpec};
pub use problems::{
    builtin_problems, harness_problems, random_rotation, rotated_variants, transformed,
    ProblemSpec, BASE_SUITE, VARIANT_SUITE,
};
pub use runner::{run_experiment, run_single, Experiment, ExperimentConfig, RunRecord};
