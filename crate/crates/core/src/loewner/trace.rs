//! Trace extraction by composing inverse vertical-slit maps.

use serde::{Deserialize, Serialize};

use super::driving::DrivingPath;
use super::LoewnerError;
use crate::paths::{Point, SampledPath};

/// Points whose imaginary part drops below `-BRANCH_TOL · (1 + |z|)` are
/// reported as a branch failure.
const BRANCH_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceConfig {
    /// Capacity step used when a driving function is sampled for a trace.
    pub dt: f64,
    /// Subdivision factor for driving steps near a force point.
    pub substeps: usize,
    /// Offset `ε_tip` above the driving point where the innermost map is
    /// evaluated; `None` means `dt^{0.6}` with `dt` the mean driving step.
    pub tip_refinement: Option<f64>,
    /// Evaluate the trace at every `stride`-th step (the last step is
    /// always included).
    pub stride: usize,
}

impl Default for TraceConfig {
    fn default() -> Self {
        TraceConfig { dt: 1e-5, substeps: 16, tip_refinement: None, stride: 1 }
    }
}

impl TraceConfig {
    pub fn validate(&self) -> Result<(), LoewnerError> {
        if !(self.dt > 0.0) || self.stride == 0 || self.substeps < 2 {
            return Err(LoewnerError::InvalidParameter("need dt > 0, stride ≥ 1, substeps ≥ 2".into()));
        }
        if let Some(e) = self.tip_refinement {
            if !(e >= 0.0 && e.is_finite()) {
                return Err(LoewnerError::InvalidParameter(format!("tip offset {e} must be nonnegative")));
            }
        }
        Ok(())
    }

    /// Step indices at which the trace is evaluated, for `n` steps.
    pub fn output_steps(&self, n: usize) -> Vec<usize> {
        let mut ks: Vec<usize> = (0..=n).step_by(self.stride.max(1)).collect();
        if *ks.last().unwrap() != n {
            ks.push(n);
        }
        ks
    }
}

/// `η(t_k) = G_1⁻¹ ∘ … ∘ G_k⁻¹(W_k + i ε_tip)` with
/// `G_j⁻¹(w) = W_j + √((w − W_j)² − 4δ_j)` on the upper-half-plane branch.
///
/// All requested points are pushed through the maps together, from the
/// last map to the first, so the cost is `O(N · P)` for `N` steps and `P`
/// output points. Times are capacity times.
pub fn trace_from_driving(driving: &DrivingPath, config: &TraceConfig) -> Result<SampledPath, LoewnerError> {
    driving.validate()?;
    config.validate()?;
    let n = driving.steps();
    let eps = config.tip_refinement.unwrap_or_else(|| (driving.total_time() / n as f64).powf(0.6));
    let ks = config.output_steps(n);
    let p = ks.len();
    let mut re = vec![0.0; p];
    let mut im = vec![0.0; p];
    // ks[0] = 0 is the seed itself; it never sees a map
    re[0] = driving.w[0];
    let mut lo = p;
    let four_d: Vec<f64> = driving.step_durations.iter().map(|d| 4.0 * d).collect();
    for j in (1..=n).rev() {
        while lo > 1 && ks[lo - 1] >= j {
            lo -= 1;
            re[lo] = driving.w[ks[lo]];
            im[lo] = eps;
        }
        let wj = driving.w[j];
        let fd = four_d[j - 1];
        for m in lo..p {
            let (a, b) = (re[m] - wj, im[m]);
            if b < -BRANCH_TOL * (1.0 + a.abs()) {
                return Err(LoewnerError::BranchError { step: j, index: ks[m] });
            }
            let (sr, si) = slit_sqrt(a * a - b * b - fd, 2.0 * a * b, a);
            re[m] = wj + sr;
            im[m] = si;
        }
    }
    let all_times = driving.times();
    let times = ks.iter().map(|&k| all_times[k]).collect();
    let points = re.into_iter().zip(im).map(|(x, y)| Point::new(x, y)).collect();
    SampledPath::new(times, points, format!("sle kappa={} seed={}", driving.kappa, driving.seed))
        .map_err(|e| LoewnerError::InvalidParameter(e.to_string()))
}

/// Square root of `zr + i zi` with nonnegative imaginary part; on the real
/// axis the sign of the real part follows `sign`.
#[inline]
fn slit_sqrt(zr: f64, zi: f64, sign: f64) -> (f64, f64) {
    let r = (zr * zr + zi * zi).sqrt();
    if r == 0.0 {
        return (0.0, 0.0);
    }
    // pick the stable formula for each component
    if zr >= 0.0 {
        let t = (0.5 * (r + zr)).sqrt();
        (t.copysign(sign), zi.abs() / (2.0 * t))
    } else {
        let t = (0.5 * (r - zr)).sqrt();
        ((zi.abs() / (2.0 * t)).copysign(sign), t)
    }
}
