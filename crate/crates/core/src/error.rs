use thiserror::Error;

/// Errors surfaced by the bandit engine, smoothers, and distribution machinery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("loss vector must have at least 2 arms, got {0}")]
    TooFewArms(usize),

    #[error("loss entry {value} at arm {arm} outside [-1, 0]")]
    LossOutOfRange { arm: usize, value: f64 },

    #[error("simplex point entry {value} at arm {arm} is not strictly positive")]
    NonPositiveProbability { arm: usize, value: f64 },

    #[error("simplex point sums to {sum}, expected 1 within {tol}")]
    NotNormalized { sum: f64, tol: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("parameter `{name}` = {value} outside valid range ({requirement})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    #[error("dual root-finder failed after {iterations} iterations; bracket [{lo}, {hi}], residual {residual}")]
    RootFinderFailed {
        iterations: usize,
        lo: f64,
        hi: f64,
        residual: f64,
    },

    #[error("non-finite value encountered in {context}")]
    NonFinite { context: &'static str },

    #[error("cumulative loss estimate at arm {arm} is positive ({value}); losses must be non-positive")]
    PositiveEstimate { arm: usize, value: f64 },

    #[error("no closed form for E[max] of {family}; use a bound or Monte Carlo")]
    NoClosedForm { family: &'static str },

    #[error("E[max] is infinite for {family} with the given parameters")]
    InfiniteExpectedMax { family: &'static str },

    #[error("hazard rate of {family} is unbounded; no finite supremum")]
    UnboundedHazard { family: &'static str },

    #[error("cdf evaluates to 1 at x = {x}; hazard undefined")]
    HazardAtSaturation { x: f64 },

    #[error("empty trace set")]
    EmptyTraces,

    #[error("environment spec invalid: {0}")]
    InvalidEnvironment(String),

    #[error("divergence penalty {value} at round {round} below -1e-8: gradient/potential inconsistency")]
    NegativeDivergence { round: usize, value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
