//! Event schemes behind the lower bounds for Markov processes.

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::parallel::{ensemble_map, rng_from_seed, sample_seed};
use crate::paths::Point;

/// A process whose values can be drawn exactly at arbitrary increasing times.
pub trait ProcessSampler: Sync {
    /// Values at `times` (starting value at `times[0]` is the origin).
    fn sample_at(&self, times: &[f64], seed: u64) -> Vec<Point>;
}

/// Standard Brownian motion in dimension 1 or 2 via exact Gaussian increments.
#[derive(Clone, Copy, Debug)]
pub struct BrownianSampler {
    pub dim: usize,
}

impl ProcessSampler for BrownianSampler {
    fn sample_at(&self, times: &[f64], seed: u64) -> Vec<Point> {
        let mut rng = rng_from_seed(seed);
        let mut p = Point::ORIGIN;
        let mut out = Vec::with_capacity(times.len());
        out.push(p);
        for w in times.windows(2) {
            let sd = (w[1] - w[0]).sqrt();
            let dx: f64 = StandardNormal.sample(&mut rng);
            p.x += sd * dx;
            if self.dim == 2 {
                let dy: f64 = StandardNormal.sample(&mut rng);
                p.y += sd * dy;
            }
            out.push(p);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkovLilConfig {
    pub d_w: f64,
    pub a0: f64,
    pub eps_list: Vec<f64>,
    pub runs: usize,
    /// Last shell index for the events on `e^{−k}`.
    #[serde(default = "default_k_max")]
    pub k_max: u32,
    #[serde(default)]
    pub master_seed: u64,
}

fn default_k_max() -> u32 {
    30
}

impl MarkovLilConfig {
    /// `a₀ = 1` for Brownian motion: the increment tail `exp(−a₀² log(1/ε) / 2)`
    /// then equals `√ε`, the calibration used in the lower-bound argument.
    pub fn brownian_calibrated(eps_list: Vec<f64>, runs: usize, master_seed: u64) -> Self {
        MarkovLilConfig { d_w: 2.0, a0: 1.0, eps_list, runs, k_max: default_k_max(), master_seed }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if !(self.d_w > 1.0) || !(self.a0 >= 0.0) || self.k_max < 2 {
            return Err(ExperimentError::Config("need d_w > 1, a0 ≥ 0, k_max ≥ 2".into()));
        }
        if let Some(e) = self.eps_list.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
            return Err(ExperimentError::Config(format!("ε = {e} not in (0,1)")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkovLilReport {
    pub eps: Vec<f64>,
    /// Fraction of runs in which some `A_{ε,k}` occurs, per ε.
    pub union_frequency: Vec<f64>,
    /// Number of shell events `A_k`, `2 ≤ k ≤ k_max`, in each run.
    pub shell_counts: Vec<usize>,
    pub mean_shell_count: f64,
    /// Union frequency nondecreasing as ε decreases.
    pub monotone: bool,
}

/// For each ε, runs the grid `kε` on `[0, 1]` and records whether some step
/// satisfies `d(X_{kε}, X_{(k−1)ε}) ≥ a₀ ε^{1/d_w} (log ε⁻¹)^{1−1/d_w}`; separately
/// counts shell events `d(X_{e^{−k}}, X_{e^{−k−1}}) ≥ a₀ e^{−k/d_w} (log k)^{1−1/d_w}`.
pub fn markov_lil_experiment<S: ProcessSampler>(sampler: &S, config: &MarkovLilConfig) -> Result<MarkovLilReport, ExperimentError> {
    config.validate()?;
    let dw = config.d_w;
    let ne = config.eps_list.len() as u64;
    let mut union_frequency = Vec::new();
    for (ei, &eps) in config.eps_list.iter().enumerate() {
        let steps = (1.0 / eps).floor() as usize;
        let times: Vec<f64> = (0..=steps).map(|k| k as f64 * eps).collect();
        let thr = config.a0 * eps.powf(1.0 / dw) * (1.0 / eps).ln().powf(1.0 - 1.0 / dw);
        let hits = ensemble_map(config.runs, |run| {
            let x = sampler.sample_at(&times, sample_seed(config.master_seed, run as u64 * (ne + 1) + ei as u64));
            x.windows(2).any(|w| w[1].dist(w[0]) >= thr)
        });
        union_frequency.push(hits.iter().filter(|h| **h).count() as f64 / config.runs.max(1) as f64);
    }
    // shells e^{-k}, k = k_max+1 down to 0, in increasing time
    let times: Vec<f64> = std::iter::once(0.0).chain((0..=config.k_max + 1).rev().map(|k| (-(k as f64)).exp())).collect();
    let shell_counts = ensemble_map(config.runs, |run| {
        let x = sampler.sample_at(&times, sample_seed(config.master_seed, run as u64 * (ne + 1) + ne));
        // x[i] sits at e^{-(k_max+2-i)} for i ≥ 1
        let at = |k: u32| x[(config.k_max + 2 - k) as usize];
        (2..=config.k_max)
            .filter(|&k| {
                let kf = k as f64;
                at(k).dist(at(k + 1)) >= config.a0 * (-kf / dw).exp() * kf.ln().powf(1.0 - 1.0 / dw)
            })
            .count()
    });
    let mean_shell_count = shell_counts.iter().sum::<usize>() as f64 / config.runs.max(1) as f64;
    let mut idx: Vec<usize> = (0..config.eps_list.len()).collect();
    idx.sort_by(|&a, &b| config.eps_list[b].total_cmp(&config.eps_list[a]));
    let monotone = idx.windows(2).all(|w| union_frequency[w[1]] >= union_frequency[w[0]]);
    Ok(MarkovLilReport { eps: config.eps_list.clone(), union_frequency, shell_counts, mean_shell_count, monotone })
}
