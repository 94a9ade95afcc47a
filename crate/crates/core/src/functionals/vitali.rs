//! Greedy extraction of disjoint high-increment intervals.

use serde::{Deserialize, Serialize};

use crate::gauges::Gauge;
use crate::paths::SampledPath;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VitaliResult {
    /// `[t_i, u_i]` in scan order; consecutive intervals may share an endpoint
    /// but never overlap.
    pub intervals: Vec<(f64, f64)>,
    /// `Σ (u_i − t_i)`.
    pub coverage: f64,
    /// `Σ σ⁻¹(|X_{u_i} − X_{t_i}|)`.
    pub gauge_sum: f64,
    pub eps: f64,
}

impl VitaliResult {
    /// Whether `gauge_sum > 1 − eps`.
    pub fn exceeds(&self) -> bool {
        self.gauge_sum > 1.0 - self.eps
    }
}

/// Left-to-right scan: from each sample `t`, take the smallest sampled lag
/// `s ≤ s_max` with `|X_{t+s} − X_t| > σ(s)`, record `[t, t+s]` and resume
/// at `t+s`; without such a lag move to the next sample.
///
/// Since `σ(σ⁻¹(y)) ≥ y > σ(s)` forces `σ⁻¹(y) > s`, the gauge sum dominates the
/// coverage term by term.
pub fn vitali_extract<G: Gauge + ?Sized>(path: &SampledPath, sigma: &G, eps: f64, s_max: f64) -> VitaliResult {
    let (t, p) = (path.times(), path.points());
    let n = t.len();
    let mut intervals = Vec::new();
    let (mut coverage, mut gauge_sum) = (0.0, 0.0);
    let mut i = 0;
    while i + 1 < n {
        let mut hit = None;
        for j in i + 1..n {
            let s = t[j] - t[i];
            if s > s_max {
                break;
            }
            let inc = p[j].dist(p[i]);
            if inc > sigma.eval(s) {
                hit = Some((j, inc));
                break;
            }
        }
        match hit {
            Some((j, inc)) => {
                intervals.push((t[i], t[j]));
                coverage += t[j] - t[i];
                gauge_sum += sigma.inverse(inc);
                i = j;
            }
            None => i += 1,
        }
    }
    VitaliResult { intervals, coverage, gauge_sum, eps }
}
