//! Gradient-based prediction for adversarial multi-armed bandits.
//!
//! The engine plays the classic bandit round loop — sample an arm from the
//! gradient of a smoothed max-potential, observe one loss coordinate, build
//! an inverse-probability estimate of the full loss vector — with two
//! interchangeable smoothing back-ends:
//!
//! * [`tsallis`]: Tsallis-entropy regularization of the leader choice, with
//!   the softmax/log-sum-exp pair as its α → 1 endpoint;
//! * [`perturb`]: stochastic smoothing by iid noise (follow the perturbed
//!   leader), with geometric resampling replacing the intractable gradient
//!   and a hazard-rate calculus for its regret bound.
//!
//! [`dist`] carries the noise-distribution library (densities, hazards,
//! exact inverse-CDF samplers, mirroring/conditioning adapters, expected
//! maxima), [`penalty`] the regret-decomposition instrumentation, [`env`]
//! loss-sequence generators, and [`verify`] the oracle-backed property
//! batteries.

pub mod dist;
pub mod engine;
pub mod env;
pub mod error;
pub mod penalty;
pub mod perturb;
pub mod potential;
pub mod rng;
pub mod special;
pub mod stats;
pub mod tsallis;
pub mod types;
pub mod verify;

pub use dist::{
    expected_max, expected_max_best, Emax, EmaxKind, EmaxMethod, Family, PerturbationModel,
    SupHazard,
};
pub use engine::{
    aggregate, expected_regret, realized_regret, run_round, run_trace, Comparator, LedgerMode,
    RegretStats, Runner, SmootherConfig, Trace,
};
pub use env::{generate, EnvironmentSpec};
pub use error::{Error, Result};
pub use penalty::{PenaltyLedger, SparseEstimate};
pub use perturb::PerturbationConfig;
pub use tsallis::TsallisConfig;
pub use types::{EstimateState, LossVector, SimplexPoint};
