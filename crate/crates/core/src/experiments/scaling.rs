//! Self-similarity check by a two-sample Kolmogorov–Smirnov test.

use serde::{Deserialize, Serialize};

use super::stats::{ks_distance, ks_p_value};
use super::ExperimentError;
use crate::paths::SampledPath;

pub const MIN_SCALING_PATHS: usize = 200;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub lambda: f64,
    pub d: f64,
    pub t_probe: f64,
    pub ks: f64,
    pub p_value: f64,
    pub n: usize,
}

/// Compares `|η(λ t)|` against `λ^{1/d} |η(t)|` across the ensemble, both
/// measured from the starting point.
///
/// Both samples come from the same paths, so they are dependent and the
/// asymptotic p-value is nominal.
pub fn scaling_check(ensemble: &[SampledPath], lam: f64, d: f64, t_probe: f64) -> Result<ScalingReport, ExperimentError> {
    if !(lam > 0.0 && d > 0.0 && t_probe > 0.0) {
        return Err(ExperimentError::Config("need λ, d, t_probe > 0".into()));
    }
    let usable: Vec<&SampledPath> = ensemble
        .iter()
        .filter(|p| {
            let t0 = p.start_time();
            p.end_time() - t0 >= t_probe.max(lam * t_probe)
        })
        .collect();
    if usable.len() < MIN_SCALING_PATHS {
        return Err(ExperimentError::InsufficientSamples { have: usable.len(), need: MIN_SCALING_PATHS });
    }
    let k = lam.powf(1.0 / d);
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for p in &usable {
        let (t0, x0) = (p.start_time(), p.points()[0]);
        a.push(p.value_at(t0 + lam * t_probe).dist(x0));
        b.push(k * p.value_at(t0 + t_probe).dist(x0));
    }
    let ks = ks_distance(&a, &b);
    Ok(ScalingReport { lambda: lam, d, t_probe, ks, p_value: ks_p_value(ks, a.len(), b.len()), n: a.len() })
}
