//! The gradient-based prediction round loop: sample an arm from the
//! smoother's distribution, incur the chosen coordinate of the loss vector,
//! build a sparse unbiased (or resampling) estimate of the full loss, and
//! fold it into the cumulative estimate state.
//!
//! A run is strictly sequential; distinct runs share nothing and may execute
//! in parallel.

use crate::error::{Error, Result};
use crate::penalty::{penalty_decomposition, PenaltyLedger, SparseEstimate};
use crate::perturb::{ftpl_sample, geometric_resampling_estimate, PerturbationConfig};
use crate::potential::{Potential, SoftmaxPotential, TsallisPotential};
use crate::perturb::PerturbPotential;
use crate::rng::{splitmix64, RunRng};
use crate::tsallis::{softmax_distribution, tsallis_distribution, TsallisConfig};
use crate::types::{EstimateState, LossVector, SimplexPoint};
use serde::{Deserialize, Serialize};

/// Salt for deriving the ledger's Monte Carlo noise seed from the run seed.
const LEDGER_SEED_SALT: u64 = 0x4C45_4447_4552;

/// Which smoothing back-end drives the sampling distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SmootherConfig {
    Tsallis {
        #[serde(flatten)]
        cfg: TsallisConfig,
    },
    /// p ∝ exp(η L̂): the α → 1 endpoint with η as inverse temperature.
    Softmax { eta: f64 },
    Perturbation {
        #[serde(flatten)]
        cfg: PerturbationConfig,
    },
}

impl SmootherConfig {
    pub fn tsallis(alpha: f64, eta: f64) -> Result<Self> {
        Ok(Self::Tsallis {
            cfg: TsallisConfig::new(alpha, eta)?,
        })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Tsallis { cfg } => cfg.validate(),
            Self::Softmax { eta } => {
                if !(eta.is_finite() && *eta > 0.0) {
                    return Err(Error::InvalidParameter {
                        name: "eta",
                        value: *eta,
                        requirement: "> 0",
                    });
                }
                Ok(())
            }
            Self::Perturbation { cfg } => cfg.validate(),
        }
    }

    /// The analysis potential matching this smoother. Monte Carlo potentials
    /// draw their common noise from a seed derived from `run_seed`.
    pub fn potential(&self, run_seed: u64) -> Box<dyn Potential> {
        match self {
            Self::Tsallis { cfg } => Box::new(TsallisPotential { cfg: *cfg }),
            Self::Softmax { eta } => Box::new(SoftmaxPotential { eta: *eta }),
            Self::Perturbation { cfg } => Box::new(PerturbPotential::new(
                cfg.model.clone(),
                cfg.eta,
                cfg.mc_samples,
                splitmix64(run_seed ^ LEDGER_SEED_SALT),
            )),
        }
    }
}

/// What one round produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundRecord {
    pub arm: usize,
    pub incurred: f64,
    /// The sparse estimate entry added at `arm`.
    pub estimate: f64,
}

pub(crate) fn inverse_probability_estimate(incurred: f64, prob: f64) -> f64 {
    incurred / prob
}

/// A prepared single run: smoother state, substreams, and the cumulative
/// estimate vector.
pub struct Runner {
    smoother: SmootherConfig,
    state: EstimateState,
    rng: RunRng,
    gr_cap: u64,
}

impl Runner {
    /// `horizon` is the planned number of rounds; it only matters for the
    /// default resampling cap ⌈√(N·horizon)⌉.
    pub fn new(smoother: &SmootherConfig, arms: usize, horizon: usize, seed: u64) -> Result<Self> {
        smoother.validate()?;
        if arms < 2 {
            return Err(Error::TooFewArms(arms));
        }
        let gr_cap = match smoother {
            SmootherConfig::Perturbation { cfg } => cfg.resolved_gr_cap(arms, horizon.max(1)),
            _ => 1,
        };
        Ok(Self {
            smoother: smoother.clone(),
            state: EstimateState::zero(arms),
            rng: RunRng::new(seed),
            gr_cap,
        })
    }

    pub fn state(&self) -> &EstimateState {
        &self.state
    }

    pub fn seed(&self) -> u64 {
        self.rng.seed()
    }

    /// The sampling distribution the next round would draw from, when the
    /// smoother has one in closed form.
    pub fn distribution(&self) -> Result<Option<SimplexPoint>> {
        match &self.smoother {
            SmootherConfig::Tsallis { cfg } => {
                Ok(Some(tsallis_distribution(self.state.cumulative(), cfg)?))
            }
            SmootherConfig::Softmax { eta } => {
                Ok(Some(softmax_distribution(self.state.cumulative(), *eta)?))
            }
            SmootherConfig::Perturbation { .. } => Ok(None),
        }
    }

    /// Play one round against `loss`.
    pub fn round(&mut self, loss: &LossVector) -> Result<RoundRecord> {
        if loss.arms() != self.state.arms() {
            return Err(Error::DimensionMismatch {
                expected: self.state.arms(),
                got: loss.arms(),
            });
        }
        let record = match &self.smoother {
            SmootherConfig::Tsallis { cfg } => {
                let p = tsallis_distribution(self.state.cumulative(), cfg)?;
                let arm = p.sample_index(self.rng.sampling());
                let incurred = loss.get(arm);
                RoundRecord {
                    arm,
                    incurred,
                    estimate: inverse_probability_estimate(incurred, p.get(arm)),
                }
            }
            SmootherConfig::Softmax { eta } => {
                let p = softmax_distribution(self.state.cumulative(), *eta)?;
                let arm = p.sample_index(self.rng.sampling());
                let incurred = loss.get(arm);
                RoundRecord {
                    arm,
                    incurred,
                    estimate: inverse_probability_estimate(incurred, p.get(arm)),
                }
            }
            SmootherConfig::Perturbation { cfg } => {
                let arm = ftpl_sample(
                    self.state.cumulative(),
                    &cfg.model,
                    cfg.eta,
                    self.rng.sampling(),
                )?;
                let incurred = loss.get(arm);
                let gr = geometric_resampling_estimate(
                    self.state.cumulative(),
                    &cfg.model,
                    cfg.eta,
                    self.gr_cap,
                    arm,
                    incurred,
                    self.rng.resample(),
                );
                RoundRecord {
                    arm,
                    incurred,
                    estimate: gr.value,
                }
            }
        };
        self.state = self.state.advanced(record.arm, record.estimate)?;
        Ok(record)
    }
}

/// One GBPA round as a pure function of (state, smoother, loss, seed).
///
/// The resampling cap, when not pinned in the config, is resolved against a
/// horizon of `round + 1` — trace-level runs resolve it against the full
/// horizon instead.
pub fn run_round(
    state: &EstimateState,
    smoother: &SmootherConfig,
    loss: &LossVector,
    seed: u64,
) -> Result<(usize, f64, EstimateState)> {
    let mut runner = Runner::new(smoother, state.arms(), state.round() + 1, seed)?;
    runner.state = state.clone();
    let record = runner.round(loss)?;
    Ok((record.arm, record.incurred, runner.state))
}

/// Whether to attach the penalty ledger to a trace. Closed-form smoothers
/// pay two dual solves per round; the perturbation smoother pays a full
/// common-random-number Monte Carlo sweep per round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LedgerMode {
    Skip,
    Compute,
}

/// Record of one full run, in the wire format used by the harness.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trace {
    pub seed: u64,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "T")]
    pub t: usize,
    pub smoother: SmootherConfig,
    pub chosen_arms: Vec<usize>,
    pub incurred_losses: Vec<f64>,
    /// Realized regret against the best fixed arm of this run's loss matrix.
    pub regret: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ledger: Option<PenaltyLedger>,
    /// Per-round sparse estimates, kept for replay; not part of the wire
    /// format.
    #[serde(skip)]
    pub estimates: Vec<SparseEstimate>,
}

/// Play a full loss sequence and assemble the trace.
pub fn run_trace(
    smoother: &SmootherConfig,
    losses: &[LossVector],
    seed: u64,
    ledger: LedgerMode,
) -> Result<Trace> {
    if losses.is_empty() {
        return Err(Error::EmptyTraces);
    }
    let n = losses[0].arms();
    let t = losses.len();
    let mut runner = Runner::new(smoother, n, t, seed)?;
    let mut chosen = Vec::with_capacity(t);
    let mut incurred = Vec::with_capacity(t);
    let mut estimates = Vec::with_capacity(t);
    for loss in losses {
        let rec = runner.round(loss)?;
        chosen.push(rec.arm);
        incurred.push(rec.incurred);
        estimates.push(SparseEstimate {
            arm: rec.arm,
            value: rec.estimate,
        });
    }
    let regret = realized_regret(losses, &chosen, Comparator::BestFixed);
    let ledger = match ledger {
        LedgerMode::Skip => None,
        LedgerMode::Compute => Some(penalty_decomposition(
            &estimates,
            n,
            smoother.potential(seed).as_ref(),
        )?),
    };
    Ok(Trace {
        seed,
        n,
        t,
        smoother: smoother.clone(),
        chosen_arms: chosen,
        incurred_losses: incurred,
        regret,
        ledger,
        estimates,
    })
}

/// Which fixed action the learner is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparator {
    BestFixed,
    Arm(usize),
}

/// max_i Σ_t (g_{t,i} − g_{t,i_t}) for one arm sequence (or the fixed-arm
/// variant when `comparator` pins i).
pub fn realized_regret(losses: &[LossVector], arms_played: &[usize], comparator: Comparator) -> f64 {
    debug_assert_eq!(losses.len(), arms_played.len());
    let n = losses[0].arms();
    let mut cum = vec![0.0; n];
    let mut learner = 0.0;
    for (loss, &arm) in losses.iter().zip(arms_played) {
        for (i, c) in cum.iter_mut().enumerate() {
            *c += loss.get(i);
        }
        learner += loss.get(arm);
    }
    let comparator_total = match comparator {
        Comparator::BestFixed => cum.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        Comparator::Arm(i) => cum[i],
    };
    comparator_total - learner
}

/// Monte Carlo regret across traces that share one loss sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretStats {
    pub mean: f64,
    pub std_error: f64,
    pub per_trace: Vec<f64>,
}

pub fn expected_regret(
    losses: &[LossVector],
    traces: &[Trace],
    comparator: Comparator,
) -> Result<RegretStats> {
    if traces.is_empty() {
        return Err(Error::EmptyTraces);
    }
    let t = losses.len();
    let n = losses[0].arms();
    for trace in traces {
        if trace.t != t || trace.n != n {
            return Err(Error::DimensionMismatch {
                expected: t,
                got: trace.t,
            });
        }
    }
    let per_trace: Vec<f64> = traces
        .iter()
        .map(|tr| realized_regret(losses, &tr.chosen_arms, comparator))
        .collect();
    Ok(aggregate(&per_trace))
}

/// Mean and standard error of a sample.
pub fn aggregate(values: &[f64]) -> RegretStats {
    let k = values.len();
    let mean = values.iter().sum::<f64>() / k as f64;
    let std_error = if k < 2 {
        0.0
    } else {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k as f64 - 1.0);
        (var / k as f64).sqrt()
    };
    RegretStats {
        mean,
        std_error,
        per_trace: values.to_vec(),
    }
}
