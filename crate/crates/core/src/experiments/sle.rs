//! Content of SLE traces up to hitting radii: scaling slope and lower tail.

use serde::{Deserialize, Serialize};

use super::stats::{line, median, quantile};
use super::tail::{tail_fit_with, TailFit, TailFitConfig};
use super::ExperimentError;
use crate::content::{content_profile, default_levels};
use crate::loewner::{sample_trace, DrivingParams, TraceConfig};
use crate::parallel::{ensemble_map, sample_seed};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContentScalingConfig {
    pub kappa: f64,
    pub traces: usize,
    #[serde(default = "one")]
    pub t_max: f64,
    pub dt: f64,
    /// Trace output stride in driving steps.
    pub stride: usize,
    pub eps_min: f64,
    /// Radii as multiples of the ensemble scale.
    pub r_factors: Vec<f64>,
    /// The scale is this quantile of `sup |η|` over the ensemble, so that
    /// most traces reach every radius within the capacity horizon.
    #[serde(default = "tenth")]
    pub scale_quantile: f64,
    #[serde(default)]
    pub master_seed: u64,
}

fn one() -> f64 {
    1.0
}
fn tenth() -> f64 {
    0.1
}

/// Per trace: the running maximum of `|η|` and the extrapolated content of
/// each prefix, sample by sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceContent {
    pub seed: u64,
    pub running_max: Vec<f64>,
    pub content: Vec<f64>,
}

impl TraceContent {
    /// `Cont(η[0, τ_r])`, with `τ_r` the first sample at distance `≥ r`.
    pub fn content_at_radius(&self, r: f64) -> Option<f64> {
        let k = self.running_max.partition_point(|&m| m < r);
        self.content.get(k).copied()
    }

    pub fn sup_norm(&self) -> f64 {
        *self.running_max.last().unwrap()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContentScalingReport {
    pub d: f64,
    pub scale: f64,
    pub radii: Vec<f64>,
    pub median_content: Vec<f64>,
    /// Traces reaching each radius.
    pub reached: Vec<usize>,
    /// Slope of `ln median Cont(η[0, τ_r])` against `ln r`.
    pub slope: f64,
    pub traces: Vec<TraceContent>,
}

impl ContentScalingReport {
    /// `Cont(η[0, τ_r])` over the traces that reach `r`.
    pub fn contents_at(&self, r: f64) -> Vec<f64> {
        self.traces.iter().filter_map(|t| t.content_at_radius(r)).collect()
    }

    /// Tail fit of `1 / Cont(η[0, τ_r])`, whose slope estimates `1/(d−1)`.
    /// The grid spans the central-to-upper range of the reciprocals.
    pub fn inverse_content_tail(&self, r: f64, grid_points: usize, cfg: &TailFitConfig) -> Result<TailFit, ExperimentError> {
        let inv: Vec<f64> = self.contents_at(r).into_iter().filter(|c| *c > 0.0).map(|c| 1.0 / c).collect();
        let (lo, hi) = (quantile(&inv, 0.5), quantile(&inv, 1.0 - 5.0 / inv.len().max(1) as f64));
        let grid: Vec<f64> = (0..grid_points).map(|i| lo * (hi / lo).powf(i as f64 / (grid_points - 1).max(1) as f64)).collect();
        tail_fit_with(&inv, &grid, cfg)
    }
}

pub fn trace_content(cfg: &ContentScalingConfig, d: f64, seed: u64) -> Result<TraceContent, ExperimentError> {
    let params = DrivingParams { kappa: cfg.kappa, rhos: vec![], u0: vec![], t_max: cfg.t_max, dt: cfg.dt, substeps: 16 };
    let tcfg = TraceConfig { dt: cfg.dt, stride: cfg.stride, ..Default::default() };
    let trace = sample_trace(&params, &tcfg, seed)?;
    let (levels, h) = default_levels(cfg.eps_min);
    let prof = content_profile(&trace, d, &levels, h)?;
    let mut m = 0.0f64;
    let running_max = trace
        .points()
        .iter()
        .map(|p| {
            m = m.max(p.norm());
            m
        })
        .collect();
    Ok(TraceContent { seed, running_max, content: prof.extrapolated() })
}

/// Simulates the ensemble, fixes the radius scale from it, and fits the
/// growth of the median content with the radius.
pub fn content_scaling_experiment(cfg: &ContentScalingConfig) -> Result<ContentScalingReport, ExperimentError> {
    if cfg.traces == 0 || cfg.r_factors.len() < 2 {
        return Err(ExperimentError::Config("need traces > 0 and at least two radii".into()));
    }
    let d = (1.0 + cfg.kappa / 8.0).min(2.0);
    let traces = ensemble_map(cfg.traces, |i| {
        let seed = sample_seed(cfg.master_seed, i as u64);
        trace_content(cfg, d, seed).map_err(|e| ExperimentError::AtSample { index: i, seed, source: Box::new(e) })
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let sups: Vec<f64> = traces.iter().map(|t| t.sup_norm()).collect();
    let scale = quantile(&sups, cfg.scale_quantile);
    let radii: Vec<f64> = cfg.r_factors.iter().map(|f| f * scale).collect();
    let mut rep = ContentScalingReport { d, scale, radii: radii.clone(), median_content: vec![], reached: vec![], slope: f64::NAN, traces };
    for &r in &radii {
        let c = rep.contents_at(r);
        rep.reached.push(c.len());
        rep.median_content.push(median(&c));
    }
    let lx: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let ly: Vec<f64> = rep.median_content.iter().map(|c| c.ln()).collect();
    rep.slope = line(&lx, &ly).map(|(_, b)| b).unwrap_or(f64::NAN);
    Ok(rep)
}
