//! Tsallis-entropy smoothing of the max function over the simplex.
//!
//! The smoothed potential is Φ̃(G) = max_{p ∈ Δ_N} { ⟨p, G⟩ − η S_α(p) } with
//! S_α(p) = (1 − Σ p_i^α)/(1 − α), 0 < α < 1. Stationarity pins the maximizer
//! to p_i(λ) = (ηα / ((1−α)(λ − G_i)))^{1/(1−α)} for the unique λ > max_i G_i
//! with Σ p_i(λ) = 1; the dual is solved by safeguarded Newton/bisection in
//! log space so exponents of order 1/(1−α) cannot overflow.
//!
//! The α → 1 endpoint is the softmax/log-sum-exp pair, provided as a separate
//! code path (the 1/(1−α) exponent is hopeless there numerically). Note the
//! conventions: `softmax_distribution(G, η)` uses η as an inverse temperature
//! multiplying G, which matches the Tsallis family at regularizer weight 1/η.

use crate::error::{Error, Result};
use crate::types::SimplexPoint;
use serde::{Deserialize, Serialize};

/// Probabilities below this are treated as having underflowed; the dual solve
/// floors log-probabilities here so a simplex point stays strictly positive.
const LOG_PROB_FLOOR: f64 = -690.0; // exp(-690) ≈ 1e-300

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TsallisConfig {
    /// Entropy index, strictly inside (0, 1).
    pub alpha: f64,
    /// Regularization weight, > 0.
    pub eta: f64,
    /// Tolerance on |Σ p_i(λ) − 1| for the dual root-finder.
    #[serde(default = "default_newton_tol")]
    pub newton_tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
}

fn default_newton_tol() -> f64 {
    1e-13
}

fn default_max_iter() -> usize {
    200
}

impl TsallisConfig {
    pub fn new(alpha: f64, eta: f64) -> Result<Self> {
        let cfg = Self {
            alpha,
            eta,
            newton_tol: default_newton_tol(),
            max_iter: default_max_iter(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: self.alpha,
                requirement: "strictly inside (0, 1); use the softmax path for α = 1",
            });
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "eta",
                value: self.eta,
                requirement: "> 0",
            });
        }
        Ok(())
    }
}

struct DualSolution {
    log_probs: Vec<f64>,
}

/// Solve Σ p_i(λ) = 1 for λ in log space.
///
/// s(λ) = ln Σ p_i(λ) is strictly decreasing; the bracket
/// [max G + ηα/(1−α), max G + ηα N^{1−α}/(1−α) + 1] pins s ≥ 0 on the left
/// (the leading arm alone has p = 1 there) and s < 0 on the right. Newton
/// steps are accepted only inside the current bracket, else we bisect.
fn solve_dual(g: &[f64], cfg: &TsallisConfig) -> Result<DualSolution> {
    cfg.validate()?;
    if g.len() < 2 {
        return Err(Error::TooFewArms(g.len()));
    }
    if g.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite {
            context: "tsallis dual input",
        });
    }
    let n = g.len();
    let alpha = cfg.alpha;
    let eta = cfg.eta;
    let one_m_a = 1.0 - alpha;
    let g_max = g.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    // ln p_i(λ) = (ln(ηα) − ln((1−α)(λ − G_i))) / (1−α)
    let log_eta_alpha = (eta * alpha).ln();
    let log_p = |lambda: f64, out: &mut Vec<f64>| {
        out.clear();
        for &gi in g {
            let lp = (log_eta_alpha - (one_m_a * (lambda - gi)).ln()) / one_m_a;
            out.push(lp);
        }
    };
    // log Σ exp with max subtraction
    let lse = |lps: &[f64]| {
        let m = lps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        m + lps.iter().map(|lp| (lp - m).exp()).sum::<f64>().ln()
    };

    let mut lo = g_max + eta * alpha / one_m_a;
    let mut hi = g_max + eta * alpha * (n as f64).powf(one_m_a) / one_m_a + 1.0;
    let mut lps = Vec::with_capacity(n);

    log_p(lo, &mut lps);
    let s_lo = lse(&lps);
    if s_lo <= 0.0 {
        // Only the leading arm carries mass at fp resolution; λ = lo is the
        // root to machine precision.
        let floored = lps.iter().map(|&lp| lp.max(LOG_PROB_FLOOR)).collect();
        return Ok(DualSolution { log_probs: floored });
    }
    log_p(hi, &mut lps);
    let mut s_hi = lse(&lps);
    let mut expand = 0;
    while s_hi > 0.0 {
        // Mathematically unreachable; guards fp mishaps on extreme inputs.
        hi = g_max + (hi - g_max) * 2.0;
        log_p(hi, &mut lps);
        s_hi = lse(&lps);
        expand += 1;
        if expand > 64 {
            return Err(Error::RootFinderFailed {
                iterations: expand,
                lo,
                hi,
                residual: s_hi,
            });
        }
    }

    let mut lambda = 0.5 * (lo + hi);
    for iter in 0..cfg.max_iter {
        log_p(lambda, &mut lps);
        let s = lse(&lps);
        if !s.is_finite() {
            return Err(Error::NonFinite {
                context: "tsallis dual residual",
            });
        }
        if s.abs() <= cfg.newton_tol {
            let floored = lps.iter().map(|&lp| lp.max(LOG_PROB_FLOOR)).collect();
            return Ok(DualSolution { log_probs: floored });
        }
        if s > 0.0 {
            lo = lambda;
        } else {
            hi = lambda;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(1.0) {
            // Bracket exhausted at fp resolution; λ is as good as it gets.
            let floored = lps.iter().map(|&lp| lp.max(LOG_PROB_FLOOR)).collect();
            return Ok(DualSolution { log_probs: floored });
        }
        // s'(λ) = −(1/(1−α)) Σ q_i / (λ − G_i), q = normalized p
        let m = lps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = lps.iter().map(|lp| (lp - m).exp()).collect();
        let wsum: f64 = weights.iter().sum();
        let s_prime = -(1.0 / one_m_a)
            * weights
                .iter()
                .zip(g)
                .map(|(w, &gi)| w / (lambda - gi))
                .sum::<f64>()
            / wsum;
        debug_assert!(
            s_prime < 0.0,
            "dual must be strictly decreasing, got s'={s_prime} at iter {iter}"
        );
        let newton = lambda - s / s_prime;
        lambda = if s_prime < 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    log_p(lambda, &mut lps);
    Err(Error::RootFinderFailed {
        iterations: cfg.max_iter,
        lo,
        hi,
        residual: lse(&lps),
    })
}

/// The maximizer p = ∇Φ̃(G) of the Tsallis-smoothed potential.
pub fn tsallis_distribution(g: &[f64], cfg: &TsallisConfig) -> Result<SimplexPoint> {
    let sol = solve_dual(g, cfg)?;
    let mut probs: Vec<f64> = sol.log_probs.iter().map(|lp| lp.exp()).collect();
    let sum: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= sum;
    }
    SimplexPoint::new(probs)
}

/// Φ̃(G) evaluated at the computed maximizer: ⟨p*, G⟩ − η S_α(p*).
pub fn tsallis_potential(g: &[f64], cfg: &TsallisConfig) -> Result<f64> {
    let sol = solve_dual(g, cfg)?;
    let probs: Vec<f64> = sol.log_probs.iter().map(|lp| lp.exp()).collect();
    let sum: f64 = probs.iter().sum();
    let inner: f64 = probs.iter().zip(g).map(|(p, &gi)| p / sum * gi).sum();
    // Σ p^α via the stored logs keeps precision for α near 1.
    let pow_sum: f64 = sol
        .log_probs
        .iter()
        .map(|lp| (cfg.alpha * (lp - sum.ln())).exp())
        .sum();
    let entropy = (1.0 - pow_sum) / (1.0 - cfg.alpha);
    Ok(inner - cfg.eta * entropy)
}

/// p_i ∝ exp(η G_i), computed with max subtraction. η is an inverse
/// temperature here: the Tsallis family at index α → 1 and regularizer
/// weight 1/η reproduces it.
pub fn softmax_distribution(g: &[f64], eta: f64) -> Result<SimplexPoint> {
    if g.len() < 2 {
        return Err(Error::TooFewArms(g.len()));
    }
    if g.iter().any(|x| !x.is_finite()) || !eta.is_finite() {
        return Err(Error::NonFinite {
            context: "softmax input",
        });
    }
    let m = g.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut w: Vec<f64> = g.iter().map(|&gi| (eta * (gi - m)).exp()).collect();
    let sum: f64 = w.iter().sum();
    for x in &mut w {
        *x /= sum;
        *x = x.max(f64::MIN_POSITIVE);
    }
    SimplexPoint::new(w)
}

/// Log-sum-exp potential (1/η) ln Σ exp(η G_i), the α → 1 conjugate.
pub fn softmax_potential(g: &[f64], eta: f64) -> f64 {
    let m = g.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    m + g.iter().map(|&gi| (eta * (gi - m)).exp()).sum::<f64>().ln() / eta
}

/// Two-term regret bound for the Tsallis smoother:
/// η (N^{1−α} − 1)/(1−α)  +  N^α T / (2 η α).
pub fn tsallis_regret_bound(alpha: f64, eta: f64, n: usize, t: usize) -> f64 {
    let nf = n as f64;
    let one_m_a = 1.0 - alpha;
    let overestimation = eta * (one_m_a * nf.ln()).exp_m1() / one_m_a;
    let divergence = if t == 0 {
        0.0
    } else {
        nf.powf(alpha) * t as f64 / (2.0 * eta * alpha)
    };
    overestimation + divergence
}

/// The η balancing the two terms of the bound (after relaxing
/// N^{1−α} − 1 to N^{1−α}): √(T(1−α)/(2α)) · N^{α−1/2}.
pub fn minimax_eta(alpha: f64, n: usize, t: usize) -> f64 {
    (t as f64 * (1.0 - alpha) / (2.0 * alpha)).sqrt() * (n as f64).powf(alpha - 0.5)
}

/// The relaxed bound at the minimax η: √(2TN/(α(1−α))), minimized over α at
/// 1/2 where it reads 2√(2TN).
pub fn tsallis_corollary_bound(alpha: f64, n: usize, t: usize) -> f64 {
    (2.0 * t as f64 * n as f64 / (alpha * (1.0 - alpha))).sqrt()
}

/// α → 1 limit of the bound in the inverse-temperature convention of
/// [`softmax_distribution`]: ln N / η + η N T / 2.
pub fn softmax_regret_bound(eta: f64, n: usize, t: usize) -> f64 {
    let nf = n as f64;
    nf.ln() / eta + eta * nf * t as f64 / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn cfg(alpha: f64, eta: f64) -> TsallisConfig {
        TsallisConfig::new(alpha, eta).unwrap()
    }

    /// Brute-force maximizer of ⟨p,G⟩ − ηS_α(p) over {(q, 1−q)}.
    fn grid_oracle_n2(g: &[f64; 2], alpha: f64, eta: f64, step: f64) -> (f64, f64) {
        let mut best_q = 0.5;
        let mut best_val = f64::NEG_INFINITY;
        let mut q = step;
        while q < 1.0 {
            let s = (1.0 - (q.powf(alpha) + (1.0 - q).powf(alpha))) / (1.0 - alpha);
            let val = q * g[0] + (1.0 - q) * g[1] - eta * s;
            if val > best_val {
                best_val = val;
                best_q = q;
            }
            q += step;
        }
        (best_q, best_val)
    }

    #[test]
    fn uniform_at_zero_vector() {
        for &alpha in &[0.1, 0.5, 0.9] {
            for &eta in &[0.5, 1.0, 10.0] {
                let p = tsallis_distribution(&[0.0; 4], &cfg(alpha, eta)).unwrap();
                for &pi in p.probs() {
                    close(pi, 0.25, 1e-12);
                }
            }
        }
    }

    #[test]
    fn matches_grid_oracle_n2() {
        let g = [-1.0, 0.0];
        let (q_star, val_star) = grid_oracle_n2(&g, 0.5, 1.0, 1e-4);
        let p = tsallis_distribution(&g, &cfg(0.5, 1.0)).unwrap();
        close(p.get(0), q_star, 2e-4);
        close(p.get(1), 1.0 - q_star, 2e-4);
        let phi = tsallis_potential(&g, &cfg(0.5, 1.0)).unwrap();
        assert!(phi >= val_star - 1e-9, "potential {phi} below grid max {val_star}");
        close(phi, val_star, 1e-6);
    }

    #[test]
    fn softmax_closed_form_values() {
        let p = softmax_distribution(&[-1.0, 0.0], 1.0).unwrap();
        close(p.get(0), 0.268_941_421_369_995_1, 1e-12);
        close(p.get(1), 0.731_058_578_630_004_9, 1e-12);
        // uniform G → uniform p
        let u = softmax_distribution(&[-0.3; 5], 2.0).unwrap();
        for &pi in u.probs() {
            close(pi, 0.2, 1e-15);
        }
        // η → 0 flattens any G
        let flat = softmax_distribution(&[-1.0, -0.2, 0.0], 1e-12).unwrap();
        for &pi in flat.probs() {
            close(pi, 1.0 / 3.0, 1e-9);
        }
    }

    #[test]
    fn near_one_alpha_recovers_softmax() {
        let g = [-1.0, 0.0];
        let target = softmax_distribution(&g, 1.0).unwrap();
        let mut last_err = f64::INFINITY;
        for &alpha in &[0.9, 0.99, 0.999, 1.0 - 1e-6] {
            let p = tsallis_distribution(&g, &cfg(alpha, 1.0)).unwrap();
            let err = p
                .probs()
                .iter()
                .zip(target.probs())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(err < last_err + 1e-12, "error not decreasing at α={alpha}");
            last_err = err;
        }
        assert!(last_err <= 1e-4, "α=1−1e−6 error {last_err} too large");
    }

    #[test]
    fn limit_matches_inverse_temperature_softmax() {
        // Tsallis at weight η tends to p ∝ exp(G/η): softmax at 1/η.
        let g = [-2.0, -0.5, 0.0];
        for &eta in &[0.5, 2.0] {
            let p = tsallis_distribution(&g, &cfg(1.0 - 1e-6, eta)).unwrap();
            let q = softmax_distribution(&g, 1.0 / eta).unwrap();
            for (a, b) in p.probs().iter().zip(q.probs()) {
                close(*a, *b, 1e-4);
            }
        }
    }

    #[test]
    fn potential_at_zero_vector() {
        // Φ̃(0) = η (N^{1−α} − 1)/(1−α), the uniform-point entropy.
        for &(alpha, eta, n) in &[(0.5, 1.0, 4usize), (0.3, 2.0, 6), (0.9, 0.7, 3)] {
            let phi = tsallis_potential(&vec![0.0; n], &cfg(alpha, eta)).unwrap();
            let expect = eta * ((n as f64).powf(1.0 - alpha) - 1.0) / (1.0 - alpha);
            close(phi, expect, 1e-10);
        }
    }

    #[test]
    fn potential_dominates_max() {
        let g = [0.0, -1e6, -3.0];
        let phi = tsallis_potential(&g, &cfg(0.5, 1.0)).unwrap();
        assert!(phi >= 0.0, "Φ̃ must dominate max_i G_i, got {phi}");
        assert!(phi < 1.0, "leading arm should dominate, got {phi}");
        let p = tsallis_distribution(&g, &cfg(0.5, 1.0)).unwrap();
        // power-law tails: the −3 arm keeps a visible share, the −1e6 arm
        // keeps a strictly positive sliver
        assert!(p.get(0) > 0.9, "p0 = {}", p.get(0));
        assert!(p.get(2) < 0.1 && p.get(2) > 1e-4, "p2 = {}", p.get(2));
        assert!(p.get(1) > 0.0 && p.get(1) < 1e-10, "p1 = {}", p.get(1));
    }

    #[test]
    fn dual_sum_is_monotone_in_lambda() {
        let g = [-3.0, -1.0, 0.0];
        let c = cfg(0.5, 1.0);
        let p_sum = |lambda: f64| -> f64 {
            g.iter()
                .map(|&gi| {
                    ((c.eta * c.alpha) / ((1.0 - c.alpha) * (lambda - gi))).powf(1.0 / (1.0 - c.alpha))
                })
                .sum()
        };
        let mut prev = f64::INFINITY;
        for i in 1..200 {
            let lambda = 0.001 + i as f64 * 0.25;
            let s = p_sum(lambda);
            assert!(s < prev, "Σp not strictly decreasing at λ={lambda}");
            prev = s;
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let g = [-2.0, -0.7, -0.1, 0.0];
        for &(alpha, eta) in &[(0.5, 1.0), (0.05, 2.0), (0.95, 0.4)] {
            let c = cfg(alpha, eta);
            let p = tsallis_distribution(&g, &c).unwrap();
            let h = 1e-6;
            for i in 0..g.len() {
                let mut up = g;
                let mut dn = g;
                up[i] += h;
                dn[i] -= h;
                let fd = (tsallis_potential(&up, &c).unwrap()
                    - tsallis_potential(&dn, &c).unwrap())
                    / (2.0 * h);
                close(fd, p.get(i), 1e-6);
            }
        }
    }

    #[test]
    fn loose_tolerance_degrades_gradient() {
        // Corrupting the root-finder tolerance must be visible downstream.
        let mut c = cfg(0.5, 1.0);
        c.newton_tol = 1e-2;
        let g = [-2.0, -0.7, -0.1, 0.0];
        let p = tsallis_distribution(&g, &c).unwrap();
        let exact = tsallis_distribution(&g, &cfg(0.5, 1.0)).unwrap();
        let err = p
            .probs()
            .iter()
            .zip(exact.probs())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err > 1e-6, "loose tolerance should be visible, err={err}");
    }

    #[test]
    fn bound_and_minimax_eta() {
        // α = 1/2, N=10, T=1000: bound at the minimax η stays under 2√(2TN).
        let eta = minimax_eta(0.5, 10, 1000);
        close(eta, 500f64.sqrt(), 1e-12);
        let bound = tsallis_regret_bound(0.5, eta, 10, 1000);
        let cap = 2.0 * (2.0 * 1000.0 * 10.0_f64).sqrt();
        close(cap, 282.842_712_474_619, 1e-9);
        assert!(bound <= cap, "bound {bound} exceeds corollary cap {cap}");
        // the relaxed form is exactly the cap when N^{1−α}−1 ↦ N^{1−α}
        let relaxed = eta * 10f64.sqrt() / 0.5 + 10f64.sqrt() * 1000.0 / (2.0 * eta * 0.5);
        close(relaxed, cap, 1e-9);
    }

    #[test]
    fn bound_alpha_to_one_limit() {
        // (N^{1−α}−1)/(1−α) → ln N: at α = 1−1e−9 the two-term bound equals
        // η ln N + NT/(2η) to high accuracy.
        let (n, t) = (10usize, 10_000usize);
        for &eta in &[5.0, 50.0, 147.0] {
            let b = tsallis_regret_bound(1.0 - 1e-9, eta, n, t);
            let limit = eta * (n as f64).ln() + (n * t) as f64 / (2.0 * eta);
            close(b, limit, 1e-6 * limit);
        }
        // minimizing η keeps the limit bound at √(2NT ln N) ≤ 2√(TN ln N)
        let eta_opt = ((n * t) as f64 / (2.0 * (n as f64).ln())).sqrt();
        let b_opt = tsallis_regret_bound(1.0 - 1e-9, eta_opt, n, t);
        let sqrt2 = (2.0 * (n * t) as f64 * (n as f64).ln()).sqrt();
        close(b_opt, sqrt2, 1e-6 * sqrt2);
        assert!(b_opt <= 2.0 * ((t * n) as f64 * (n as f64).ln()).sqrt());
    }

    #[test]
    fn corollary_curve_minimized_at_half() {
        let (n, t) = (10, 10_000);
        let mut best_alpha = 0.0;
        let mut best = f64::INFINITY;
        for i in 1..=9 {
            let alpha = i as f64 / 10.0;
            let c = tsallis_corollary_bound(alpha, n, t);
            // the exact two-term bound at the minimax η never exceeds it
            let exact = tsallis_regret_bound(alpha, minimax_eta(alpha, n, t), n, t);
            assert!(exact <= c + 1e-9, "α={alpha}: exact {exact} > corollary {c}");
            if c < best {
                best = c;
                best_alpha = alpha;
            }
        }
        close(best_alpha, 0.5, 1e-12);
        close(best, 2.0 * (2.0 * (n * t) as f64).sqrt(), 1e-9);
    }

    #[test]
    fn bound_t_zero_is_overestimation_only() {
        let b = tsallis_regret_bound(0.5, 3.0, 10, 0);
        close(b, 3.0 * (10f64.sqrt() - 1.0) / 0.5, 1e-12);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(TsallisConfig::new(1.0, 1.0).is_err());
        assert!(TsallisConfig::new(0.0, 1.0).is_err());
        assert!(TsallisConfig::new(0.5, 0.0).is_err());
        assert!(tsallis_distribution(&[0.0], &cfg(0.5, 1.0)).is_err());
        assert!(tsallis_distribution(&[f64::NAN, 0.0], &cfg(0.5, 1.0)).is_err());
    }

    #[test]
    fn handles_wide_spreads_and_extreme_alpha() {
        // exponent 1/(1−α) = 1e6 with a 1e6-wide spread; log-space solve
        let p = tsallis_distribution(&[-1e6, 0.0], &cfg(1.0 - 1e-6, 1.0)).unwrap();
        assert!(p.get(1) > 0.999_999);
        assert!(p.get(0) > 0.0);
        let p2 = tsallis_distribution(&[-1e8, -3.0, 0.0], &cfg(0.05, 2.0)).unwrap();
        assert!((p2.probs().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }
}
