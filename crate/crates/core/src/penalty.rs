//! Regret-decomposition instrumentation: the penalty ledger splits a run's
//! regret surrogate into an overestimation term Φ̃(0) − Φ(0), an
//! underestimation term Φ(L̂_T) − Φ̃(L̂_T), and per-round Bregman divergences
//! D(L̂_t, L̂_{t−1}), whose sum telescopes back to Φ̃(L̂_T) exactly.
//!
//! Also hosts the numeric check of the curvature condition
//! ∇²_ii Φ̃ ≤ C (∇_i Φ̃)^γ that drives the divergence bounds.

use crate::error::{Error, Result};
use crate::potential::Potential;
use serde::{Deserialize, Serialize};

/// Divergences may dip this far below zero before we call the
/// gradient/potential pair inconsistent.
pub const DIVERGENCE_SLACK: f64 = -1e-8;

/// One sparse loss estimate: `value` at `arm`, zero elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SparseEstimate {
    pub arm: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenaltyLedger {
    /// Φ̃(0) − Φ(0); non-negative for both smoother families.
    pub overestimation: f64,
    /// Φ(L̂_T) − Φ̃(L̂_T); non-positive for a dominating smoothing.
    pub underestimation: f64,
    pub divergence_total: f64,
    pub per_round_divergence: Vec<f64>,
}

fn max_coord(v: &[f64]) -> f64 {
    v.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

/// Replay an estimate sequence through a potential and assemble the ledger.
///
/// A divergence below [`DIVERGENCE_SLACK`] is an error: the potential claims
/// convexity, so a materially negative Bregman divergence means the gradient
/// and the value disagree.
pub fn penalty_decomposition(
    estimates: &[SparseEstimate],
    arms: usize,
    potential: &dyn Potential,
) -> Result<PenaltyLedger> {
    if arms < 2 {
        return Err(Error::TooFewArms(arms));
    }
    let zero = vec![0.0; arms];
    let phi0 = potential.value(&zero)?;
    let mut cumulative = zero;
    let mut value_prev = phi0;
    let mut per_round = Vec::with_capacity(estimates.len());
    let mut total = 0.0;

    for (round, est) in estimates.iter().enumerate() {
        if est.arm >= arms {
            return Err(Error::DimensionMismatch {
                expected: arms,
                got: est.arm,
            });
        }
        let grad = potential.gradient(&cumulative)?;
        cumulative[est.arm] += est.value;
        let value_next = potential.value(&cumulative)?;
        let divergence = value_next - value_prev - grad[est.arm] * est.value;
        if !divergence.is_finite() {
            return Err(Error::NonFinite {
                context: "bregman divergence",
            });
        }
        if divergence < DIVERGENCE_SLACK {
            return Err(Error::NegativeDivergence {
                round,
                value: divergence,
            });
        }
        per_round.push(divergence);
        total += divergence;
        value_prev = value_next;
    }

    let underestimation = max_coord(&cumulative) - value_prev;
    Ok(PenaltyLedger {
        overestimation: phi0,
        underestimation,
        divergence_total: total,
        per_round_divergence: per_round,
    })
}

/// Residual of the telescoping identity
/// Φ̃(L̂_T) = Φ̃(0) + Σ_t ⟨∇Φ̃(L̂_{t−1}), ℓ̂_t⟩ + Σ_t D(L̂_t, L̂_{t−1}),
/// with the left side evaluated fresh at the final state.
pub fn telescoping_residual(
    estimates: &[SparseEstimate],
    arms: usize,
    potential: &dyn Potential,
) -> Result<f64> {
    let zero = vec![0.0; arms];
    let phi0 = potential.value(&zero)?;
    let mut cumulative = zero;
    let mut rhs = phi0;
    let mut value_prev = phi0;
    for est in estimates {
        let grad = potential.gradient(&cumulative)?;
        cumulative[est.arm] += est.value;
        let value_next = potential.value(&cumulative)?;
        let inner = grad[est.arm] * est.value;
        rhs += inner + (value_next - value_prev - inner);
        value_prev = value_next;
    }
    let lhs = potential.value(&cumulative)?;
    Ok((lhs - rhs).abs())
}

/// One coordinate's curvature probe.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConsistencyProbe {
    pub point: Vec<f64>,
    pub arm: usize,
    pub hessian_diag: f64,
    pub gradient: f64,
    /// ∇²_ii / (∇_i)^γ, to be compared against C.
    pub ratio: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub gamma: f64,
    pub c: f64,
    pub fd_step: f64,
    pub probes: Vec<ConsistencyProbe>,
    pub worst_ratio: f64,
    pub all_within: bool,
}

/// Numeric check of (γ, C)-differential-consistency: for every probe point
/// and coordinate, estimate ∇²_ii Φ̃ by central differences of the gradient
/// and flag ratios exceeding C·(1 + 1e−3).
pub fn check_differential_consistency(
    potential: &dyn Potential,
    probe_points: &[Vec<f64>],
    gamma: f64,
    c: f64,
    fd_step: f64,
) -> Result<ConsistencyReport> {
    let mut probes = Vec::new();
    let mut worst: f64 = f64::NEG_INFINITY;
    for point in probe_points {
        let grad = potential.gradient(point)?;
        for arm in 0..point.len() {
            let mut up = point.clone();
            let mut dn = point.clone();
            up[arm] += fd_step;
            dn[arm] -= fd_step;
            let g_up = potential.gradient(&up)?[arm];
            let g_dn = potential.gradient(&dn)?[arm];
            let hessian = (g_up - g_dn) / (2.0 * fd_step);
            if !hessian.is_finite() || !grad[arm].is_finite() {
                return Err(Error::NonFinite {
                    context: "finite-difference hessian",
                });
            }
            let ratio = hessian / grad[arm].powf(gamma);
            let flagged = ratio > c * (1.0 + 1e-3);
            worst = worst.max(ratio);
            probes.push(ConsistencyProbe {
                point: point.clone(),
                arm,
                hessian_diag: hessian,
                gradient: grad[arm],
                ratio,
                flagged,
            });
        }
    }
    let all_within = probes.iter().all(|p| !p.flagged);
    Ok(ConsistencyReport {
        gamma,
        c,
        fd_step,
        probes,
        worst_ratio: worst,
        all_within,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{SoftmaxPotential, TsallisPotential};
    use crate::tsallis::TsallisConfig;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn tsallis(alpha: f64, eta: f64) -> TsallisPotential {
        TsallisPotential {
            cfg: TsallisConfig::new(alpha, eta).unwrap(),
        }
    }

    #[test]
    fn empty_sequence_ledger() {
        let pot = tsallis(0.5, 1.0);
        let ledger = penalty_decomposition(&[], 4, &pot).unwrap();
        // Φ̃(0) = η(N^{1−α}−1)/(1−α) = 2(√4 − 1) = 2
        close(ledger.overestimation, 2.0, 1e-10);
        close(ledger.underestimation, -2.0, 1e-10);
        assert_eq!(ledger.per_round_divergence.len(), 0);
        close(ledger.divergence_total, 0.0, 0.0);
    }

    #[test]
    fn overestimation_is_uniform_point_entropy() {
        for &(alpha, eta, n) in &[(0.5, 1.0, 2usize), (0.3, 0.5, 5), (0.8, 2.0, 8)] {
            let pot = tsallis(alpha, eta);
            let ledger = penalty_decomposition(&[], n, &pot).unwrap();
            let expect = eta * ((n as f64).powf(1.0 - alpha) - 1.0) / (1.0 - alpha);
            close(ledger.overestimation, expect, 1e-9);
        }
    }

    #[test]
    fn telescoping_identity_deterministic_sequence() {
        let pot = tsallis(0.5, 1.0);
        let ests = [
            SparseEstimate { arm: 0, value: -2.0 },
            SparseEstimate { arm: 1, value: -0.5 },
            SparseEstimate { arm: 0, value: -1.5 },
        ];
        let residual = telescoping_residual(&ests, 2, &pot).unwrap();
        assert!(residual <= 1e-8, "telescoping residual {residual}");
        let ledger = penalty_decomposition(&ests, 2, &pot).unwrap();
        for (i, d) in ledger.per_round_divergence.iter().enumerate() {
            assert!(*d >= DIVERGENCE_SLACK, "divergence {d} at round {i}");
        }
        // overestimation non-negative, underestimation non-positive
        assert!(ledger.overestimation >= 0.0);
        assert!(ledger.underestimation <= 1e-10);
    }

    #[test]
    fn softmax_ledger_behaves() {
        let pot = SoftmaxPotential { eta: 0.5 };
        let ests = [
            SparseEstimate { arm: 2, value: -3.0 },
            SparseEstimate { arm: 0, value: -1.0 },
            SparseEstimate { arm: 2, value: -2.0 },
            SparseEstimate { arm: 1, value: -0.25 },
        ];
        let ledger = penalty_decomposition(&ests, 3, &pot).unwrap();
        // Φ̃(0) = ln(3)/η
        close(ledger.overestimation, 3f64.ln() / 0.5, 1e-12);
        assert!(ledger.per_round_divergence.iter().all(|d| *d >= 0.0));
        assert!(telescoping_residual(&ests, 3, &pot).unwrap() <= 1e-8);
    }

    #[test]
    fn inconsistent_gradient_is_caught() {
        // A concave value paired with any "gradient" violates the Bregman
        // non-negativity the ledger relies on.
        struct Liar;
        impl Potential for Liar {
            fn value(&self, g: &[f64]) -> Result<f64> {
                Ok(g.iter().cloned().fold(f64::INFINITY, f64::min))
            }
            fn gradient(&self, g: &[f64]) -> Result<Vec<f64>> {
                Ok(vec![1.0 / g.len() as f64; g.len()])
            }
        }
        let ests = [SparseEstimate { arm: 0, value: -2.0 }];
        let err = penalty_decomposition(&ests, 2, &Liar);
        assert!(matches!(err, Err(Error::NegativeDivergence { .. })), "{err:?}");
    }

    #[test]
    fn tsallis_differential_consistency_on_probes() {
        let alpha = 0.5;
        let eta = 1.0;
        let pot = tsallis(alpha, eta);
        let probes = vec![
            vec![0.0, 0.0],
            vec![-1.0, 0.0],
            vec![-5.0, -2.0],
            vec![-9.9, -0.1],
        ];
        let report = check_differential_consistency(
            &pot,
            &probes,
            2.0 - alpha,
            1.0 / (eta * alpha),
            1e-5,
        )
        .unwrap();
        assert!(report.all_within, "worst ratio {}", report.worst_ratio);
        assert!(report.worst_ratio <= (1.0 + 1e-3) / (eta * alpha));
    }

    #[test]
    fn symmetric_two_arm_hessian_bound() {
        // At G = 0 with N=2, α=1/2, η=1: ∇ = (1/2, 1/2) by symmetry and the
        // curvature bound reads ∇²_ii ≤ (1/(ηα)) (1/2)^{3/2}.
        let pot = tsallis(0.5, 1.0);
        let report =
            check_differential_consistency(&pot, &[vec![0.0, 0.0]], 1.5, 2.0, 1e-5).unwrap();
        for p in &report.probes {
            close(p.gradient, 0.5, 1e-9);
            assert!(p.hessian_diag <= 2.0 * 0.5f64.powf(1.5) * (1.0 + 1e-3));
            assert!(p.hessian_diag > 0.0);
        }
    }

    #[test]
    fn violated_condition_is_flagged() {
        // softmax has γ=1 curvature ∇²_ii = η p(1−p); claiming C far below
        // η/4 must flag.
        let pot = SoftmaxPotential { eta: 1.0 };
        let report =
            check_differential_consistency(&pot, &[vec![0.0, 0.0]], 1.0, 0.01, 1e-5).unwrap();
        assert!(!report.all_within);
        assert!(report.probes.iter().any(|p| p.flagged));
    }
}
