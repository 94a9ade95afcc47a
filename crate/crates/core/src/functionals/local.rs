//! Pairwise modulus ratios and dyadic-shell growth statistics.

use serde::{Deserialize, Serialize};

use crate::gauges::Gauge;
use crate::paths::SampledPath;

/// `max |η(t) − η(s)| / ω(t − s)` over sampled pairs with `0 < t − s < delta`.
pub fn moc_ratio<G: Gauge + ?Sized>(path: &SampledPath, omega: &G, delta: f64) -> f64 {
    let (t, p) = (path.times(), path.points());
    let mut best = 0.0f64;
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            let lag = t[j] - t[i];
            if !(lag < delta) {
                break;
            }
            let r = p[i].dist(p[j]) / omega.eval(lag);
            if r > best {
                best = r;
            }
        }
    }
    best
}

/// All-pairs reference for [`moc_ratio`].
pub fn moc_ratio_exhaustive<G: Gauge + ?Sized>(path: &SampledPath, omega: &G, delta: f64) -> f64 {
    let (t, p) = (path.times(), path.points());
    let mut best = 0.0f64;
    for i in 0..t.len() {
        for j in 0..t.len() {
            let lag = (t[j] - t[i]).abs();
            if lag > 0.0 && lag < delta {
                best = best.max(p[i].dist(p[j]) / omega.eval(lag));
            }
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShellMax {
    pub k: i32,
    /// `None` when the shell holds no sample.
    pub max: Option<f64>,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LilResult {
    pub shells: Vec<ShellMax>,
    /// Largest shell maximum; 0 when every shell is empty.
    pub overall: f64,
    /// Shells that held no sample.
    pub empty_shells: Vec<i32>,
}

fn shell_stat<G: Gauge + ?Sized>(path: &SampledPath, gauge: &G, shells: impl Iterator<Item = (i32, f64, f64)>) -> LilResult {
    let (t, p) = (path.times(), path.points());
    let (t0, x0) = (t[0], p[0]);
    let mut out = Vec::new();
    let mut empty = Vec::new();
    let mut overall = 0.0f64;
    for (k, lo, hi) in shells {
        let a = t.partition_point(|&s| s - t0 < lo);
        let b = t.partition_point(|&s| s - t0 <= hi);
        if a >= b {
            empty.push(k);
            out.push(ShellMax { k, max: None, samples: 0 });
            continue;
        }
        let m = (a..b).map(|i| p[i].dist(x0) / gauge.eval(t[i] - t0)).fold(0.0, f64::max);
        overall = overall.max(m);
        out.push(ShellMax { k, max: Some(m), samples: b - a });
    }
    LilResult { shells: out, overall, empty_shells: empty }
}

/// `max |η(t) − η(0)| / gauge(t)` over each shell `t ∈ [2^{−k−1}, 2^{−k}]`,
/// `k_min ≤ k ≤ k_max`, with `t` measured from the first sample.
pub fn lil_statistic<G: Gauge + ?Sized>(path: &SampledPath, gauge: &G, k_min: i32, k_max: i32) -> LilResult {
    shell_stat(path, gauge, (k_min..=k_max).map(|k| (k, 2f64.powi(-k - 1), 2f64.powi(-k))))
}

/// Large-time variant over shells `t ∈ [2^k, 2^{k+1}]`.
pub fn lil_statistic_large<G: Gauge + ?Sized>(path: &SampledPath, gauge: &G, k_min: i32, k_max: i32) -> LilResult {
    shell_stat(path, gauge, (k_min..=k_max).map(|k| (k, 2f64.powi(k), 2f64.powi(k + 1))))
}
