//! The smoothed-potential interface consumed by the analysis instrumentation:
//! a convex function of the cumulative estimate vector whose gradient lies in
//! the simplex.

use crate::error::Result;
use crate::tsallis::{
    softmax_distribution, softmax_potential, tsallis_distribution, tsallis_potential,
    TsallisConfig,
};

/// A differentiable convex upper-proxy of max_i G_i. Gradients are returned
/// as plain vectors: Monte Carlo potentials may legitimately report a zero
/// frequency for an arm, which is still a valid subgradient of the empirical
/// function.
pub trait Potential {
    fn value(&self, g: &[f64]) -> Result<f64>;
    fn gradient(&self, g: &[f64]) -> Result<Vec<f64>>;
}

/// Closed-form Tsallis potential (dual solve per evaluation).
pub struct TsallisPotential {
    pub cfg: TsallisConfig,
}

impl Potential for TsallisPotential {
    fn value(&self, g: &[f64]) -> Result<f64> {
        tsallis_potential(g, &self.cfg)
    }

    fn gradient(&self, g: &[f64]) -> Result<Vec<f64>> {
        Ok(tsallis_distribution(g, &self.cfg)?.probs().to_vec())
    }
}

/// Log-sum-exp potential, the α = 1 endpoint (η is an inverse temperature).
pub struct SoftmaxPotential {
    pub eta: f64,
}

impl Potential for SoftmaxPotential {
    fn value(&self, g: &[f64]) -> Result<f64> {
        Ok(softmax_potential(g, self.eta))
    }

    fn gradient(&self, g: &[f64]) -> Result<Vec<f64>> {
        Ok(softmax_distribution(g, self.eta)?.probs().to_vec())
    }
}
