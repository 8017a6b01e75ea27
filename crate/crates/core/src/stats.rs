//! Goodness-of-fit helpers used by the verification batteries: chi-square
//! with low-count bin collapsing, Kolmogorov–Smirnov against a reference CDF,
//! and a least-squares slope for rate fits.

use crate::special::chi_square_sf;
use serde::{Deserialize, Serialize};

/// Asymptotic Kolmogorov critical value at significance 0.01: D·√n exceeds
/// this with probability 0.01 under the null.
pub const KS_CRITICAL_001: f64 = 1.627_62;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GofResult {
    pub statistic: f64,
    pub df: u64,
    pub p_value: f64,
    /// Bin count after collapsing cells with expected count below 5.
    pub bins: usize,
}

/// Pearson chi-square of observed counts against expected counts, collapsing
/// sparse cells (expected < 5) into their right neighbor.
pub fn chi_square_gof(observed: &[u64], expected: &[f64]) -> GofResult {
    assert_eq!(observed.len(), expected.len());
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let mut acc_obs = 0.0;
    let mut acc_exp = 0.0;
    for (&o, &e) in observed.iter().zip(expected) {
        acc_obs += o as f64;
        acc_exp += e;
        if acc_exp >= 5.0 {
            cells.push((acc_obs, acc_exp));
            acc_obs = 0.0;
            acc_exp = 0.0;
        }
    }
    if acc_exp > 0.0 || acc_obs > 0.0 {
        if let Some(last) = cells.last_mut() {
            last.0 += acc_obs;
            last.1 += acc_exp;
        } else {
            cells.push((acc_obs, acc_exp));
        }
    }
    if cells.len() < 2 {
        return GofResult {
            statistic: 0.0,
            df: 0,
            p_value: 1.0,
            bins: cells.len(),
        };
    }
    let statistic: f64 = cells
        .iter()
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum();
    let df = (cells.len() - 1) as u64;
    GofResult {
        statistic,
        df,
        p_value: chi_square_sf(statistic, df),
        bins: cells.len(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub scaled: f64,
    pub threshold: f64,
    pub pass: bool,
    pub n: usize,
}

/// Two-sided KS test of `samples` against a reference CDF at significance
/// 0.01 (asymptotic critical value).
pub fn ks_test(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> KsResult {
    let n = samples.len();
    assert!(n > 0);
    samples.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let nf = n as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / nf - f).max(f - i as f64 / nf);
    }
    let scaled = d * nf.sqrt();
    KsResult {
        statistic: d,
        scaled,
        threshold: KS_CRITICAL_001,
        pass: scaled <= KS_CRITICAL_001,
        n,
    }
}

/// Least-squares slope of y against x.
pub fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2);
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Slope of ln y vs ln x; the rate exponent of a power law.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    slope(&lx, &ly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn chi_square_accepts_its_own_distribution() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let probs = [0.5, 0.3, 0.15, 0.05];
        let n = 50_000u64;
        let mut observed = [0u64; 4];
        for _ in 0..n {
            let u: f64 = rng.random();
            let mut cum = 0.0;
            for (i, p) in probs.iter().enumerate() {
                cum += p;
                if u <= cum {
                    observed[i] += 1;
                    break;
                }
            }
        }
        let expected: Vec<f64> = probs.iter().map(|p| p * n as f64).collect();
        let gof = chi_square_gof(&observed, &expected);
        assert!(gof.p_value >= 0.01, "p = {}", gof.p_value);
        assert_eq!(gof.bins, 4);
    }

    #[test]
    fn chi_square_rejects_wrong_distribution() {
        let observed = [7000u64, 3000];
        let expected = [5000.0, 5000.0];
        let gof = chi_square_gof(&observed, &expected);
        assert!(gof.p_value < 1e-6);
    }

    #[test]
    fn chi_square_collapses_sparse_bins() {
        let observed = [100u64, 1, 0, 2, 97];
        let expected = [100.0, 1.0, 1.0, 1.0, 97.0];
        let gof = chi_square_gof(&observed, &expected);
        assert!(gof.bins < 5);
        assert!(gof.p_value > 0.0);
    }

    #[test]
    fn ks_accepts_uniform_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut samples: Vec<f64> = (0..100_000).map(|_| rng.random::<f64>()).collect();
        let result = ks_test(&mut samples, |x| x.clamp(0.0, 1.0));
        assert!(result.pass, "scaled D = {}", result.scaled);
    }

    #[test]
    fn ks_rejects_shifted_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut samples: Vec<f64> = (0..10_000)
            .map(|_| rng.random::<f64>() * 0.9 + 0.1)
            .collect();
        let result = ks_test(&mut samples, |x| x.clamp(0.0, 1.0));
        assert!(!result.pass);
    }

    #[test]
    fn slope_recovers_power_law() {
        let xs = [1000.0, 4000.0, 16000.0, 64000.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(0.5)).collect();
        let s = log_log_slope(&xs, &ys);
        assert!((s - 0.5).abs() < 1e-12, "slope {s}");
    }
}
