//! Experiment configuration: JSON in, validated structs out.

use anyhow::{bail, Context, Result};
use gbpa_core::rng::derive_seed;
use gbpa_core::{EnvironmentSpec, SmootherConfig};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Seeds are either a count (expanded from `master_seed` by the documented
/// splitting rule seed_i = master ⊕ splitmix64(i+1)) or an explicit list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeedSpec {
    Count(u64),
    List(Vec<u64>),
}

impl Default for SeedSpec {
    fn default() -> Self {
        SeedSpec::Count(10)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct McSettings {
    /// Attach the penalty ledger to every run. Cheap for the closed-form
    /// smoothers, a full Monte Carlo sweep per round for the perturbation
    /// smoother.
    #[serde(default)]
    pub compute_ledger: bool,
    /// Overrides the perturbation config's `mc_samples` for ledger
    /// evaluation.
    #[serde(default)]
    pub ledger_mc_samples: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(alias = "N")]
    pub n: usize,
    #[serde(alias = "T")]
    pub t: usize,
    pub smoother: SmootherConfig,
    pub environment: EnvironmentSpec,
    #[serde(default)]
    pub seeds: SeedSpec,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub output_path: Option<String>,
    #[serde(default)]
    pub mc_settings: McSettings,
    /// Also dump one trace record per run (JSON lines).
    #[serde(default)]
    pub write_traces: bool,
    /// Replace the configured η with the bound-minimizing value for this
    /// (N, T) before running: the minimax η for Tsallis, √(2 ln N/(NT)) for
    /// softmax, √(N·(sup h)·T / E[max]) for the perturbation smoother.
    #[serde(default)]
    pub auto_tune_eta: bool,
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: Self = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            bail!("n must be >= 2, got {}", self.n);
        }
        if self.t < 1 {
            bail!("t must be >= 1");
        }
        if self.seed_list().is_empty() {
            bail!("at least one seed is required");
        }
        self.smoother
            .validate()
            .context("invalid smoother config")?;
        self.environment
            .validate(self.n, self.t)
            .context("invalid environment spec")?;
        Ok(())
    }

    /// The concrete per-run seeds.
    pub fn seed_list(&self) -> Vec<u64> {
        match &self.seeds {
            SeedSpec::Count(k) => (0..*k).map(|i| derive_seed(self.master_seed, i)).collect(),
            SeedSpec::List(list) => list.clone(),
        }
    }
}
