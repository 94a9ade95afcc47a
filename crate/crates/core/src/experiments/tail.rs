//! Double-log tail exponent fits with bootstrap intervals.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::stats::{quantile, weighted_line};
use super::ExperimentError;
use crate::parallel::rng_from_seed;

pub const MIN_TAIL_SAMPLES: usize = 1000;
const MIN_USABLE: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailFitConfig {
    pub resamples: usize,
    pub seed: u64,
}

impl Default for TailFitConfig {
    fn default() -> Self {
        TailFitConfig { resamples: 200, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub r_grid: Vec<f64>,
    /// `P̂(X > r)` for each grid value.
    pub survival: Vec<f64>,
    /// Which grid values entered the fit.
    pub used: Vec<bool>,
    /// Slope of `ln(−ln P̂)` against `ln r`.
    pub slope: f64,
    pub intercept: f64,
    /// Percentile bootstrap interval for the slope.
    pub ci95: (f64, f64),
    pub n_samples: usize,
    /// Survival window `[5/n, 0.5]` that selects usable points.
    pub window: (f64, f64),
}

/// Counts of samples strictly above each grid value.
fn exceedances(sorted: &[f64], r_grid: &[f64]) -> Vec<usize> {
    r_grid.iter().map(|&r| sorted.len() - sorted.partition_point(|&x| x <= r)).collect()
}

/// Fit on the double-log transform; weights are inverse delta-method
/// variances `n P (ln P)² / (1 − P)`.
fn fit_counts(counts: &[usize], n: usize, r_grid: &[f64]) -> (Vec<f64>, Vec<bool>, Option<(f64, f64)>) {
    let lo = 5.0 / n as f64;
    let surv: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
    let used: Vec<bool> = surv.iter().zip(r_grid).map(|(&p, &r)| p >= lo && p <= 0.5 && r > 0.0).collect();
    let (mut x, mut y, mut w) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..r_grid.len() {
        if used[i] {
            let p = surv[i];
            x.push(r_grid[i].ln());
            y.push((-p.ln()).ln());
            w.push(n as f64 * p * p.ln().powi(2) / (1.0 - p));
        }
    }
    let fit = if x.len() >= MIN_USABLE { weighted_line(&x, &y, &w) } else { None };
    (surv, used, fit)
}

pub fn tail_fit(samples: &[f64], r_grid: &[f64]) -> Result<TailFit, ExperimentError> {
    tail_fit_with(samples, r_grid, &TailFitConfig::default())
}

pub fn tail_fit_with(samples: &[f64], r_grid: &[f64], config: &TailFitConfig) -> Result<TailFit, ExperimentError> {
    let n = samples.len();
    if n < MIN_TAIL_SAMPLES {
        return Err(ExperimentError::InsufficientSamples { have: n, need: MIN_TAIL_SAMPLES });
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let counts = exceedances(&sorted, r_grid);
    let (survival, used, fit) = fit_counts(&counts, n, r_grid);
    let usable = used.iter().filter(|u| **u).count();
    let Some((intercept, slope)) = fit else {
        return Err(ExperimentError::InsufficientTailData { usable });
    };

    // bin index of each sample in the grid, so a resample only needs a histogram
    let mut order: Vec<usize> = (0..r_grid.len()).collect();
    order.sort_by(|&a, &b| r_grid[a].total_cmp(&r_grid[b]));
    let sorted_grid: Vec<f64> = order.iter().map(|&i| r_grid[i]).collect();
    let bins: Vec<usize> = samples.iter().map(|&x| sorted_grid.partition_point(|&r| r < x)).collect();
    let mut rng = rng_from_seed(config.seed);
    let mut slopes = Vec::with_capacity(config.resamples);
    let mut hist = vec![0usize; r_grid.len() + 1];
    for _ in 0..config.resamples {
        hist.iter_mut().for_each(|h| *h = 0);
        for _ in 0..n {
            hist[bins[rng.random_range(0..n)]] += 1;
        }
        // samples above sorted_grid[k] are those in bins > k
        let mut above = vec![0usize; r_grid.len()];
        let mut acc = 0;
        for k in (0..r_grid.len()).rev() {
            acc += hist[k + 1];
            above[order[k]] = acc;
        }
        if let (_, _, Some((_, s))) = fit_counts(&above, n, r_grid) {
            slopes.push(s);
        }
    }
    let ci95 = if slopes.is_empty() { (f64::NAN, f64::NAN) } else { (quantile(&slopes, 0.025), quantile(&slopes, 0.975)) };
    Ok(TailFit {
        r_grid: r_grid.to_vec(),
        survival,
        used,
        slope,
        intercept,
        ci95,
        n_samples: n,
        window: (5.0 / n as f64, 0.5),
    })
}

/// `n` evenly spaced values on `[lo, hi]`.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1).max(1) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauges::integrate;
    use rand_distr::{Distribution, Exp1, StandardNormal};

    fn normal_abs(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = rng_from_seed(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).map(|x: f64| x.abs()).collect()
    }

    #[test]
    fn exponential_slope_is_one() {
        let mut rng = rng_from_seed(2);
        let s: Vec<f64> = (0..200_000).map(|_| Exp1.sample(&mut rng)).collect();
        let f = tail_fit(&s, &linear_grid(1.0, 8.0, 15)).unwrap();
        assert!((f.slope - 1.0).abs() < 0.1, "{}", f.slope);
        assert!(f.ci95.0 <= f.slope && f.slope <= f.ci95.1);
        assert!(f.survival.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn half_normal_matches_exact_survival_fit() {
        // the same weighted fit applied to the exact survival 2Φ̄(r)
        let grid = linear_grid(1.5, 3.5, 11);
        let n = 200_000;
        let f = tail_fit(&normal_abs(n, 3), &grid).unwrap();
        let phi = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let exact: Vec<usize> = grid
            .iter()
            .map(|&r| (2.0 * integrate(phi, r, r + 40.0, 1e-13, 0.0).0 * n as f64).round() as usize)
            .collect();
        let (_, _, oracle) = fit_counts(&exact, n, &grid);
        let oracle = oracle.unwrap().1;
        assert!((f.slope - oracle).abs() < 0.1, "fit {} oracle {}", f.slope, oracle);
        // the finite-r slope sits well below the asymptotic 2
        assert!(oracle > 1.4 && oracle < 1.8, "{oracle}");
    }

    #[test]
    fn degenerate_inputs() {
        let c = vec![1.0; 5000];
        assert!(matches!(tail_fit(&c, &linear_grid(0.5, 2.0, 10)), Err(ExperimentError::InsufficientTailData { .. })));
        assert!(matches!(tail_fit(&c[..10], &[1.0]), Err(ExperimentError::InsufficientSamples { .. })));
    }

    #[test]
    fn scale_equivariance() {
        let s = normal_abs(20_000, 4);
        let grid = linear_grid(1.2, 3.2, 9);
        let a = tail_fit(&s, &grid).unwrap();
        let c = 3.7;
        let sc: Vec<f64> = s.iter().map(|x| x * c).collect();
        let gc: Vec<f64> = grid.iter().map(|r| r * c).collect();
        let b = tail_fit(&sc, &gc).unwrap();
        assert!((a.slope - b.slope).abs() < 1e-9);
        assert!(b.slope >= a.ci95.0 && b.slope <= a.ci95.1);
    }
}
