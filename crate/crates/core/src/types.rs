//! Domain types shared across the engine: loss vectors, simplex points, and
//! the cumulative loss-estimate state.

use crate::error::{Error, Result};
use crate::rng::open01;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Absolute tolerance on simplex normalization.
pub const SIMPLEX_SUM_TOL: f64 = 1e-10;

/// A per-round loss vector with every entry in [−1, 0].
///
/// The loss-only convention is load-bearing: the divergence-penalty analysis
/// breaks if losses can be positive, so out-of-range entries are a hard error
/// rather than being clamped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossVector(Vec<f64>);

impl LossVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::TooFewArms(values.len()));
        }
        for (arm, &v) in values.iter().enumerate() {
            if !v.is_finite() || !(-1.0..=0.0).contains(&v) {
                return Err(Error::LossOutOfRange { arm, value: v });
            }
        }
        Ok(Self(values))
    }

    pub fn arms(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, arm: usize) -> f64 {
        self.0[arm]
    }
}

/// A strictly positive probability vector summing to 1 (within tolerance).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexPoint(Vec<f64>);

impl SimplexPoint {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        for (arm, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p <= 0.0 {
                return Err(Error::NonPositiveProbability { arm, value: p });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_SUM_TOL {
            return Err(Error::NotNormalized {
                sum,
                tol: SIMPLEX_SUM_TOL,
            });
        }
        Ok(Self(probs))
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn arms(&self) -> usize {
        self.0.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, arm: usize) -> f64 {
        self.0[arm]
    }

    /// Inverse-CDF sample from this distribution. Exact ties in the running
    /// cumulative sums resolve to the lower index, so a draw is a pure
    /// function of the uniform variate.
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u = open01(rng);
        self.index_for_uniform(u)
    }

    /// The arm whose cumulative-probability interval contains `u`.
    pub fn index_for_uniform(&self, u: f64) -> usize {
        let mut cum = 0.0;
        for (i, &p) in self.0.iter().enumerate() {
            cum += p;
            if u <= cum {
                return i;
            }
        }
        self.0.len() - 1
    }
}

/// Cumulative estimated-loss state: the vector L̂_t plus the round counter.
///
/// Starts at zero and accumulates the sparse inverse-probability (or
/// resampling) estimates; all entries stay non-positive because losses do.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateState {
    cumulative: Vec<f64>,
    round: usize,
}

impl EstimateState {
    pub fn zero(arms: usize) -> Self {
        Self {
            cumulative: vec![0.0; arms],
            round: 0,
        }
    }

    pub fn arms(&self) -> usize {
        self.cumulative.len()
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    /// Advance by one round, adding `value` at `arm` (zero elsewhere).
    pub fn advanced(&self, arm: usize, value: f64) -> Result<Self> {
        if value > 0.0 {
            return Err(Error::PositiveEstimate { arm, value });
        }
        if !value.is_finite() {
            return Err(Error::NonFinite {
                context: "loss estimate",
            });
        }
        let mut next = self.clone();
        next.cumulative[arm] += value;
        next.round += 1;
        Ok(next)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loss_vector_rejects_out_of_range() {
        assert!(LossVector::new(vec![-0.5, 0.1]).is_err());
        assert!(LossVector::new(vec![-1.5, 0.0]).is_err());
        assert!(LossVector::new(vec![-0.5]).is_err());
        assert!(LossVector::new(vec![f64::NAN, 0.0]).is_err());
        assert!(LossVector::new(vec![-1.0, 0.0]).is_ok());
    }

    #[test]
    fn simplex_point_rejects_bad_input() {
        assert!(SimplexPoint::new(vec![0.5, 0.5]).is_ok());
        assert!(SimplexPoint::new(vec![0.0, 1.0]).is_err());
        assert!(SimplexPoint::new(vec![0.6, 0.6]).is_err());
        assert!(SimplexPoint::new(vec![-0.1, 1.1]).is_err());
    }

    #[test]
    fn ties_resolve_to_lower_index() {
        let p = SimplexPoint::new(vec![0.25, 0.25, 0.5]).unwrap();
        // u exactly at the first boundary belongs to arm 0
        assert_eq!(p.index_for_uniform(0.25), 0);
        assert_eq!(p.index_for_uniform(0.250000001), 1);
        assert_eq!(p.index_for_uniform(0.5), 1);
        assert_eq!(p.index_for_uniform(0.99), 2);
    }

    #[test]
    fn estimate_state_accumulates() {
        let s = EstimateState::zero(3);
        assert_eq!(s.cumulative(), &[0.0, 0.0, 0.0]);
        let s = s.advanced(1, -4.0).unwrap();
        assert_eq!(s.cumulative(), &[0.0, -4.0, 0.0]);
        assert_eq!(s.round(), 1);
        assert!(s.advanced(0, 0.5).is_err());
    }
}
