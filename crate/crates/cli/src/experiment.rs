//! Multi-seed experiment execution: one independent GBPA run per seed
//! (parallel across seeds, deterministic regardless of thread count),
//! aggregation, and the theoretical-bound overlay.

use crate::config::ExperimentConfig;
use crate::report::{LedgerMeans, RegretReport, SweepReport};
use anyhow::{anyhow, bail, Context, Result};
use gbpa_core::penalty::SparseEstimate;
use gbpa_core::perturb::{gr_bias_budget, hazard_regret_bound};
use gbpa_core::rng::splitmix64;
use gbpa_core::stats::log_log_slope;
use gbpa_core::tsallis::{softmax_regret_bound, tsallis_regret_bound};
use gbpa_core::{aggregate, generate, penalty, PerturbationModel, Runner, SmootherConfig};
use rayon::prelude::*;
use std::time::Instant;

/// Environment draws come from a stream unrelated to the learner's.
const ENV_SEED_SALT: u64 = 0x454E_5653;

struct SeedOutcome {
    regret: f64,
    curve: Vec<f64>,
    ledger: Option<gbpa_core::PenaltyLedger>,
    trace_json: Option<String>,
}

/// The smoother actually run: the configured one, with η re-tuned for this
/// (N, T) when the config asks for it.
pub fn effective_smoother(config: &ExperimentConfig) -> Result<SmootherConfig> {
    let mut smoother = config.smoother.clone();
    if config.auto_tune_eta {
        match &mut smoother {
            SmootherConfig::Tsallis { cfg } => {
                cfg.eta = gbpa_core::tsallis::minimax_eta(cfg.alpha, config.n, config.t);
            }
            SmootherConfig::Softmax { eta } => {
                *eta = (2.0 * (config.n as f64).ln() / (config.n as f64 * config.t as f64)).sqrt();
            }
            SmootherConfig::Perturbation { cfg } => {
                cfg.eta = gbpa_core::perturb::tune_eta(&cfg.model, config.n, config.t)?;
            }
        }
    }
    if let (SmootherConfig::Perturbation { cfg }, Some(samples)) =
        (&mut smoother, config.mc_settings.ledger_mc_samples)
    {
        cfg.mc_samples = samples;
    }
    Ok(smoother)
}

fn run_one_seed(config: &ExperimentConfig, seed: u64) -> Result<SeedOutcome> {
    let env_seed = splitmix64(seed ^ ENV_SEED_SALT);
    let losses = generate(&config.environment, config.n, config.t, env_seed)?;
    let smoother = effective_smoother(config)?;
    let mut runner = Runner::new(&smoother, config.n, config.t, seed)?;

    let mut cum_arm = vec![0.0; config.n];
    let mut cum_learner = 0.0;
    let mut curve = Vec::with_capacity(config.t);
    let mut chosen = Vec::with_capacity(config.t);
    let mut incurred = Vec::with_capacity(config.t);
    let mut estimates = Vec::with_capacity(config.t);
    for loss in &losses {
        let rec = runner.round(loss)?;
        for (i, c) in cum_arm.iter_mut().enumerate() {
            *c += loss.get(i);
        }
        cum_learner += rec.incurred;
        let best = cum_arm.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        curve.push(best - cum_learner);
        chosen.push(rec.arm);
        incurred.push(rec.incurred);
        estimates.push(SparseEstimate {
            arm: rec.arm,
            value: rec.estimate,
        });
    }
    let regret = *curve.last().expect("t >= 1");

    let ledger = if config.mc_settings.compute_ledger {
        Some(penalty::penalty_decomposition(
            &estimates,
            config.n,
            smoother.potential(seed).as_ref(),
        )?)
    } else {
        None
    };

    let trace_json = if config.write_traces {
        let trace = gbpa_core::Trace {
            seed,
            n: config.n,
            t: config.t,
            smoother: smoother.clone(),
            chosen_arms: chosen,
            incurred_losses: incurred,
            regret,
            ledger: ledger.clone(),
            estimates,
        };
        Some(serde_json::to_string(&trace)?)
    } else {
        None
    };

    Ok(SeedOutcome {
        regret,
        curve,
        ledger,
        trace_json,
    })
}

/// The bound matching the smoother, including the resampling-bias term for
/// the perturbation path. `None` when no guarantee applies (unbounded
/// hazard).
pub fn theoretical_bound(smoother: &SmootherConfig, n: usize, t: usize) -> Option<f64> {
    match smoother {
        SmootherConfig::Tsallis { cfg } => Some(tsallis_regret_bound(cfg.alpha, cfg.eta, n, t)),
        SmootherConfig::Softmax { eta } => Some(softmax_regret_bound(*eta, n, t)),
        SmootherConfig::Perturbation { cfg } => {
            let base = hazard_regret_bound(&cfg.model, cfg.eta, n, t).ok()?;
            Some(base + gr_bias_budget(n, t, cfg.resolved_gr_cap(n, t)))
        }
    }
}

/// Run every seed, aggregate, and attach the bound. Seeds execute in
/// parallel; results are reduced in seed order so outputs do not depend on
/// the thread count.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RegretReport> {
    run_experiment_to(config, None)
}

/// As [`run_experiment`], writing one trace record per run (JSON lines) to
/// `trace_sink` when the config asks for traces.
pub fn run_experiment_to(
    config: &ExperimentConfig,
    trace_sink: Option<&std::path::Path>,
) -> Result<RegretReport> {
    config.validate()?;
    let start = Instant::now();
    let seeds = config.seed_list();
    let outcomes: Vec<Result<SeedOutcome>> = seeds
        .par_iter()
        .map(|&seed| run_one_seed(config, seed))
        .collect();
    let outcomes: Vec<SeedOutcome> = outcomes.into_iter().collect::<Result<_>>()?;

    let per_seed: Vec<f64> = outcomes.iter().map(|o| o.regret).collect();
    let stats = aggregate(&per_seed);

    let k = outcomes.len() as f64;
    let mut curve_mean = vec![0.0; config.t];
    let mut curve_se = vec![0.0; config.t];
    for (t, m) in curve_mean.iter_mut().enumerate() {
        *m = outcomes.iter().map(|o| o.curve[t]).sum::<f64>() / k;
    }
    if outcomes.len() > 1 {
        for (t, se) in curve_se.iter_mut().enumerate() {
            let m = curve_mean[t];
            let var = outcomes
                .iter()
                .map(|o| (o.curve[t] - m).powi(2))
                .sum::<f64>()
                / (k - 1.0);
            *se = (var / k).sqrt();
        }
    }

    let ledger_means = if config.mc_settings.compute_ledger {
        let ledgers: Vec<_> = outcomes.iter().filter_map(|o| o.ledger.as_ref()).collect();
        Some(LedgerMeans {
            overestimation: ledgers.iter().map(|l| l.overestimation).sum::<f64>() / k,
            underestimation: ledgers.iter().map(|l| l.underestimation).sum::<f64>() / k,
            divergence_total: ledgers.iter().map(|l| l.divergence_total).sum::<f64>() / k,
        })
    } else {
        None
    };

    let bound = theoretical_bound(&effective_smoother(config)?, config.n, config.t);
    let bound_satisfied = bound.map(|b| stats.mean + 2.0 * stats.std_error <= b);

    if let Some(path) = trace_sink {
        let mut body = String::new();
        for o in &outcomes {
            if let Some(json) = &o.trace_json {
                body.push_str(json);
                body.push('\n');
            }
        }
        std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
    }

    Ok(RegretReport {
        config: config.clone(),
        seeds,
        mean_regret: stats.mean,
        std_error: stats.std_error,
        per_seed_regrets: per_seed,
        ledger_means,
        theoretical_bound: bound,
        bound_satisfied,
        runtime_seconds: start.elapsed().as_secs_f64(),
        curve_mean,
        curve_se,
    })
}

/// Sweepable parameter axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    N,
    T,
    Alpha,
    Eta,
    Distribution,
}

impl std::str::FromStr for SweepAxis {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "n" => Ok(Self::N),
            "t" => Ok(Self::T),
            "alpha" => Ok(Self::Alpha),
            "eta" => Ok(Self::Eta),
            "distribution" => Ok(Self::Distribution),
            other => Err(anyhow!("unknown sweep axis `{other}` (n|t|alpha|eta|distribution)")),
        }
    }
}

/// Distribution presets accepted by the sweep axis: `gumbel`, `exponential`,
/// `gaussian`, `frechet:α`, `pareto:α`, `weibull:k`, `gamma:shape,rate`,
/// with an optional `+mirror` suffix.
pub fn parse_distribution(name: &str) -> Result<PerturbationModel> {
    let (body, mirror) = match name.strip_suffix("+mirror") {
        Some(b) => (b, true),
        None => (name, false),
    };
    let (family, arg) = match body.split_once(':') {
        Some((f, a)) => (f, Some(a)),
        None => (body, None),
    };
    let parse1 = |a: Option<&str>, default: f64| -> Result<f64> {
        Ok(match a {
            Some(s) => s.parse::<f64>().context("parsing distribution parameter")?,
            None => default,
        })
    };
    let model = match family {
        "gumbel" => PerturbationModel::gumbel(),
        "exponential" => PerturbationModel::exponential(parse1(arg, 1.0)?)?,
        "gaussian" => PerturbationModel::gaussian(),
        "frechet" => PerturbationModel::frechet(parse1(arg, 2.0)?)?,
        "pareto" => PerturbationModel::pareto_modified(parse1(arg, 2.0)?)?,
        "weibull" => PerturbationModel::weibull_modified(parse1(arg, 0.5)?)?,
        "gamma" => {
            let arg = arg.unwrap_or("1,1");
            let (shape, rate) = arg
                .split_once(',')
                .ok_or_else(|| anyhow!("gamma needs shape,rate"))?;
            PerturbationModel::gamma(shape.parse()?, rate.parse()?)?
        }
        other => bail!("unknown distribution `{other}`"),
    };
    Ok(if mirror { model.mirrored()? } else { model })
}

fn apply_axis_value(config: &ExperimentConfig, axis: SweepAxis, value: &str) -> Result<ExperimentConfig> {
    let mut next = config.clone();
    match axis {
        SweepAxis::N => next.n = value.parse().context("parsing n")?,
        SweepAxis::T => next.t = value.parse().context("parsing t")?,
        SweepAxis::Alpha => match &mut next.smoother {
            SmootherConfig::Tsallis { cfg } => {
                cfg.alpha = value.parse().context("parsing alpha")?
            }
            _ => bail!("alpha sweeps need a tsallis smoother"),
        },
        SweepAxis::Eta => match &mut next.smoother {
            SmootherConfig::Tsallis { cfg } => cfg.eta = value.parse().context("parsing eta")?,
            SmootherConfig::Softmax { eta } => *eta = value.parse().context("parsing eta")?,
            SmootherConfig::Perturbation { cfg } => {
                cfg.eta = value.parse().context("parsing eta")?
            }
        },
        SweepAxis::Distribution => match &mut next.smoother {
            SmootherConfig::Perturbation { cfg } => cfg.model = parse_distribution(value)?,
            _ => bail!("distribution sweeps need a perturbation smoother"),
        },
    }
    Ok(next)
}

/// One report per axis value; horizon sweeps also fit the log-log rate.
pub fn sweep(config: &ExperimentConfig, axis: SweepAxis, values: &[String]) -> Result<SweepReport> {
    if values.is_empty() {
        bail!("sweep needs at least one value");
    }
    let mut reports = Vec::with_capacity(values.len());
    for value in values {
        let cfg = apply_axis_value(config, axis, value)?;
        reports.push(run_experiment(&cfg)?);
    }
    let slope = if axis == SweepAxis::T && values.len() >= 2 {
        let ts: Vec<f64> = values
            .iter()
            .map(|v| v.parse::<f64>().context("parsing t"))
            .collect::<Result<_>>()?;
        let regrets: Vec<f64> = reports.iter().map(|r| r.mean_regret.max(1e-9)).collect();
        Some(log_log_slope(&ts, &regrets))
    } else {
        None
    };
    Ok(SweepReport {
        axis: format!("{axis:?}"),
        values: values.to_vec(),
        mean_regrets: reports.iter().map(|r| r.mean_regret).collect(),
        std_errors: reports.iter().map(|r| r.std_error).collect(),
        theoretical_bounds: reports.iter().map(|r| r.theoretical_bound).collect(),
        log_log_slope: slope,
        reports,
    })
}
