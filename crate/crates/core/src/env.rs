//! Loss-sequence generators for regret experiments. All adversaries are
//! oblivious: the full T×N matrix is fixed before the run, deterministically
//! from (spec, seed).

use crate::error::{Error, Result};
use crate::types::LossVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

fn default_best_arm() -> usize {
    0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnvironmentSpec {
    /// g_{t,i} = −Bernoulli(μ_i), independent across rounds and arms.
    StochasticIid { means: Vec<f64> },
    /// One arm has mean loss −(μ−Δ), the rest −μ.
    BestArmGap {
        mu: f64,
        gap: f64,
        #[serde(default = "default_best_arm")]
        best_arm: usize,
    },
    /// Like BestArmGap, but the favored arm rotates every `period` rounds.
    Switching { mu: f64, gap: f64, period: usize },
    /// Replay an explicit T×N matrix verbatim.
    Deterministic { losses: Vec<Vec<f64>> },
}

impl EnvironmentSpec {
    pub fn validate(&self, n: usize, t: usize) -> Result<()> {
        if n < 2 {
            return Err(Error::TooFewArms(n));
        }
        match self {
            Self::StochasticIid { means } => {
                if means.len() != n {
                    return Err(Error::InvalidEnvironment(format!(
                        "expected {n} means, got {}",
                        means.len()
                    )));
                }
                if means.iter().any(|m| !(0.0..=1.0).contains(m)) {
                    return Err(Error::InvalidEnvironment(
                        "means must lie in [0, 1]".into(),
                    ));
                }
            }
            Self::BestArmGap { mu, gap, best_arm } => {
                validate_gap(*mu, *gap)?;
                if *best_arm >= n {
                    return Err(Error::InvalidEnvironment(format!(
                        "best_arm {best_arm} out of range for {n} arms"
                    )));
                }
            }
            Self::Switching { mu, gap, period } => {
                validate_gap(*mu, *gap)?;
                if *period == 0 {
                    return Err(Error::InvalidEnvironment("period must be >= 1".into()));
                }
            }
            Self::Deterministic { losses } => {
                if losses.len() != t {
                    return Err(Error::InvalidEnvironment(format!(
                        "expected {t} rows, got {}",
                        losses.len()
                    )));
                }
                for row in losses {
                    if row.len() != n {
                        return Err(Error::InvalidEnvironment(format!(
                            "expected {n} columns, got {}",
                            row.len()
                        )));
                    }
                    if row.iter().any(|v| !(-1.0..=0.0).contains(v)) {
                        return Err(Error::InvalidEnvironment(
                            "losses must lie in [-1, 0]".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

fn validate_gap(mu: f64, gap: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::InvalidEnvironment("mu must lie in [0, 1]".into()));
    }
    if gap.is_nan() || gap <= 0.0 || gap >= mu {
        return Err(Error::InvalidEnvironment(
            "gap must satisfy 0 < gap < mu".into(),
        ));
    }
    Ok(())
}

/// Generate the T×N loss matrix for `spec`.
pub fn generate(spec: &EnvironmentSpec, n: usize, t: usize, seed: u64) -> Result<Vec<LossVector>> {
    spec.validate(n, t)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bernoulli_row = |means: &dyn Fn(usize) -> f64| -> Result<LossVector> {
        let row: Vec<f64> = (0..n)
            .map(|i| {
                if rng.random::<f64>() < means(i) {
                    -1.0
                } else {
                    0.0
                }
            })
            .collect();
        LossVector::new(row)
    };
    let mut out = Vec::with_capacity(t);
    match spec {
        EnvironmentSpec::StochasticIid { means } => {
            for _ in 0..t {
                out.push(bernoulli_row(&|i| means[i])?);
            }
        }
        EnvironmentSpec::BestArmGap { mu, gap, best_arm } => {
            for _ in 0..t {
                out.push(bernoulli_row(&|i| {
                    if i == *best_arm {
                        mu - gap
                    } else {
                        *mu
                    }
                })?);
            }
        }
        EnvironmentSpec::Switching { mu, gap, period } => {
            for round in 0..t {
                let best = (round / period) % n;
                out.push(bernoulli_row(&|i| if i == best { mu - gap } else { *mu })?);
            }
        }
        EnvironmentSpec::Deterministic { losses } => {
            for row in losses {
                out.push(LossVector::new(row.clone())?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_replays_verbatim() {
        let matrix = vec![vec![-0.5, 0.0], vec![0.0, -1.0], vec![-0.25, -0.75]];
        let spec = EnvironmentSpec::Deterministic {
            losses: matrix.clone(),
        };
        let out = generate(&spec, 2, 3, 42).unwrap();
        for (row, expect) in out.iter().zip(&matrix) {
            assert_eq!(row.values(), expect.as_slice());
        }
    }

    #[test]
    fn zero_means_give_zero_losses() {
        let spec = EnvironmentSpec::StochasticIid {
            means: vec![0.0; 3],
        };
        let out = generate(&spec, 3, 100, 1).unwrap();
        assert!(out
            .iter()
            .all(|row| row.values().iter().all(|&v| v == 0.0)));
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let spec = EnvironmentSpec::BestArmGap {
            mu: 0.5,
            gap: 0.2,
            best_arm: 0,
        };
        let a = generate(&spec, 4, 200, 9).unwrap();
        let b = generate(&spec, 4, 200, 9).unwrap();
        assert_eq!(a, b);
        let c = generate(&spec, 4, 200, 10).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn best_arm_gap_expectation() {
        let spec = EnvironmentSpec::BestArmGap {
            mu: 0.5,
            gap: 0.2,
            best_arm: 0,
        };
        let t = 2000;
        let out = generate(&spec, 3, t, 7).unwrap();
        let best_total: f64 = out.iter().map(|row| row.get(0)).sum();
        // E = −0.3T, sd ≈ √(0.21 T) ≈ 20.5
        let expect = -0.3 * t as f64;
        let sd = (0.21 * t as f64).sqrt();
        assert!(
            (best_total - expect).abs() <= 4.0 * sd,
            "best arm total {best_total} vs {expect}"
        );
        let other_total: f64 = out.iter().map(|row| row.get(1)).sum();
        assert!(other_total < best_total, "gap should favor arm 0");
    }

    #[test]
    fn switching_rotates_best_arm() {
        let spec = EnvironmentSpec::Switching {
            mu: 0.9,
            gap: 0.8,
            period: 50,
        };
        let out = generate(&spec, 2, 200, 3).unwrap();
        // with mu=0.9 vs 0.1 the favored arm is visible in block means
        let block_mean = |range: std::ops::Range<usize>, arm: usize| -> f64 {
            let len = range.len() as f64;
            out[range].iter().map(|r| r.get(arm)).sum::<f64>() / len
        };
        assert!(block_mean(0..50, 0) > block_mean(0..50, 1));
        assert!(block_mean(50..100, 1) > block_mean(50..100, 0));
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(generate(
            &EnvironmentSpec::StochasticIid {
                means: vec![1.5, 0.2]
            },
            2,
            10,
            0
        )
        .is_err());
        assert!(generate(
            &EnvironmentSpec::BestArmGap {
                mu: 0.5,
                gap: 0.5,
                best_arm: 0
            },
            2,
            10,
            0
        )
        .is_err());
        assert!(generate(
            &EnvironmentSpec::Deterministic {
                losses: vec![vec![-2.0, 0.0]]
            },
            2,
            1,
            0
        )
        .is_err());
        assert!(generate(
            &EnvironmentSpec::Switching {
                mu: 0.5,
                gap: 0.1,
                period: 0
            },
            2,
            10,
            0
        )
        .is_err());
    }
}
