//! Chordal Loewner chains: driving processes with force points, traces via
//! composed slit maps, and Brownian motion as an exactly sampled oracle.

mod bm;
mod driving;
mod trace;

use thiserror::Error;

pub use bm::sample_bm;
pub use driving::{sample_driving, sample_driving_with, DrivingParams, DrivingPath};
pub use trace::{trace_from_driving, TraceConfig};

use crate::paths::{point_set_diameter, Interval, SampledPath};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LoewnerError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("force point collided with the driving function at step {step}")]
    ForcePointCollision { step: usize },
    #[error("trace point for step {index} left the upper half-plane at map {step}")]
    BranchError { step: usize, index: usize },
}

/// Chordal SLE_κ(ρ) trace sampled with `config`.
pub fn sample_trace(
    params: &DrivingParams,
    config: &TraceConfig,
    seed: u64,
) -> Result<SampledPath, LoewnerError> {
    let d = sample_driving_with(params, seed)?;
    trace_from_driving(&d, config)
}

/// Interior segment of a chordal trace: drops the first 10% of capacity
/// time and every sample within `0.1 · diam` of the real axis, where
/// `diam` is the diameter of the whole trace.
pub fn interior_segment(trace: &SampledPath) -> Option<SampledPath> {
    let t0 = trace.start_time() + 0.1 * trace.span().len();
    let band = 0.1 * point_set_diameter(trace.points());
    let keep: Vec<usize> =
        (0..trace.len()).filter(|&i| trace.times()[i] >= t0 && trace.points()[i].y >= band).collect();
    if keep.is_empty() {
        return None;
    }
    let times = keep.iter().map(|&i| trace.times()[i]).collect();
    let points = keep.iter().map(|&i| trace.points()[i]).collect();
    SampledPath::new(times, points, trace.label()).ok()
}

/// Restriction to capacity times in `window`; convenience for experiments.
pub fn capacity_window(trace: &SampledPath, window: Interval) -> Option<SampledPath> {
    trace.restrict(window).ok()
}
