//! Aggregated experiment outputs and their on-disk formats. Serialized
//! artifacts are byte-identical across re-runs of the same config: wall-clock
//! runtime is reported on the console only, never persisted.

use crate::config::ExperimentConfig;
use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LedgerMeans {
    pub overestimation: f64,
    pub underestimation: f64,
    pub divergence_total: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegretReport {
    pub config: ExperimentConfig,
    pub seeds: Vec<u64>,
    pub mean_regret: f64,
    pub std_error: f64,
    pub per_seed_regrets: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ledger_means: Option<LedgerMeans>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theoretical_bound: Option<f64>,
    /// mean_regret + 2·std_error ≤ theoretical_bound, when a bound applies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_satisfied: Option<bool>,
    /// Wall-clock seconds; console only (persisted artifacts must be
    /// reproducible byte for byte).
    #[serde(skip)]
    pub runtime_seconds: f64,
    /// Mean (across seeds) cumulative regret per round, for the CSV.
    #[serde(skip)]
    pub curve_mean: Vec<f64>,
    #[serde(skip)]
    pub curve_se: Vec<f64>,
}

impl RegretReport {
    pub fn write_json(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
    }

    /// Per-round CSV: round, mean cumulative regret, its standard error, and
    /// the bound overlay scaled as bound·√(t/T). The overlay scaling is a
    /// presentation aid, not a per-round guarantee.
    pub fn write_curve_csv(&self, path: &Path) -> Result<()> {
        let t = self.curve_mean.len();
        let mut out = String::with_capacity(t * 48);
        out.push_str("round,mean_cum_regret,se_cum_regret,bound_cum\n");
        for (i, (m, se)) in self.curve_mean.iter().zip(&self.curve_se).enumerate() {
            let round = i + 1;
            match self.theoretical_bound {
                Some(bound) => {
                    let overlay = bound * ((round as f64) / t as f64).sqrt();
                    writeln!(out, "{round},{m:.8},{se:.8},{overlay:.8}")?;
                }
                None => writeln!(out, "{round},{m:.8},{se:.8},")?,
            }
        }
        let file = std::fs::File::create(path)
            .with_context(|| format!("creating {}", path.display()))?;
        let mut writer = std::io::BufWriter::new(file);
        writer.write_all(out.as_bytes())?;
        Ok(())
    }

    pub fn summary_line(&self) -> String {
        let bound = match (self.theoretical_bound, self.bound_satisfied) {
            (Some(b), Some(ok)) => format!(
                ", bound {:.2} [{}]",
                b,
                if ok { "satisfied" } else { "EXCEEDED" }
            ),
            _ => ", no bound".to_string(),
        };
        format!(
            "mean regret {:.3} ± {:.3} over {} seeds{} ({:.2}s)",
            self.mean_regret,
            self.std_error,
            self.per_seed_regrets.len(),
            bound,
            self.runtime_seconds
        )
    }
}

/// One sweep: a report per axis value, plus a fitted log-log slope for
/// horizon sweeps.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepReport {
    pub axis: String,
    pub values: Vec<String>,
    pub mean_regrets: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub theoretical_bounds: Vec<Option<f64>>,
    /// Least-squares slope of ln(mean regret) against ln(T), horizon sweeps
    /// only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_log_slope: Option<f64>,
    pub reports: Vec<RegretReport>,
}

impl SweepReport {
    pub fn write_json(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
    }

    pub fn write_summary_csv(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        out.push_str("value,mean_regret,se_regret,bound\n");
        for i in 0..self.values.len() {
            match self.theoretical_bounds[i] {
                Some(b) => writeln!(
                    out,
                    "{},{:.8},{:.8},{:.8}",
                    self.values[i], self.mean_regrets[i], self.std_errors[i], b
                )?,
                None => writeln!(
                    out,
                    "{},{:.8},{:.8},",
                    self.values[i], self.mean_regrets[i], self.std_errors[i]
                )?,
            }
        }
        std::fs::write(path, out).with_context(|| format!("writing {}", path.display()))
    }
}
