//! Experiment harness for the bandit smoothing library: config parsing,
//! multi-seed runs, sweeps, the verification battery, and distribution
//! tables. The `gbpa` binary is a thin shell over these functions.

pub mod config;
pub mod experiment;
pub mod report;
pub mod tabulate;

pub use config::{ExperimentConfig, McSettings, SeedSpec};
pub use experiment::{
    effective_smoother, parse_distribution, run_experiment, run_experiment_to, sweep,
    theoretical_bound, SweepAxis,
};
pub use report::{LedgerMeans, RegretReport, SweepReport};
pub use tabulate::{default_models, render, tabulate, DistributionTable};
