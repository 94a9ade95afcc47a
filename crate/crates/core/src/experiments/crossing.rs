//! Fast-crossing probabilities between hitting radii.

use serde::{Deserialize, Serialize};

use super::stats::line;
use super::ExperimentError;
use crate::paths::SampledPath;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossingReport {
    pub l: f64,
    pub r: f64,
    pub r_prime: Vec<f64>,
    /// Empirical `P(τ_{r+r′} ≤ τ_r + l r′)` among paths that reach `r`.
    pub probability: Vec<f64>,
    /// Paths reaching `r`.
    pub hits: usize,
    pub n_paths: usize,
    /// `c₂` of the fit `ln P ≈ ln c₁ − c₂ r′` over positive probabilities.
    pub decay_rate: Option<f64>,
    pub log_c1: Option<f64>,
}

impl CrossingReport {
    /// `c₂` of `ln P ≈ ln c₁ − c₂ (r′)^q`.
    pub fn decay_fit(&self, q: f64) -> Option<(f64, f64)> {
        let (x, y): (Vec<f64>, Vec<f64>) = self
            .r_prime
            .iter()
            .zip(&self.probability)
            .filter(|(_, p)| **p > 0.0)
            .map(|(r, p)| (r.powf(q), p.ln()))
            .unzip();
        line(&x, &y).map(|(a, b)| (a, -b))
    }
}

/// `τ_ρ = inf{t : |η(t)| ≥ ρ}` on the samples, interpolated like
/// [`SampledPath::hitting_time`].
fn tau(path: &SampledPath, rho: f64) -> Option<f64> {
    path.hitting_time(rho)
}

pub fn crossing_time_experiment(
    ensemble: &[SampledPath],
    l: f64,
    r: f64,
    r_prime_grid: &[f64],
) -> Result<CrossingReport, ExperimentError> {
    if !(l > 0.0 && r >= 0.0) || r_prime_grid.iter().any(|v| !(*v > 0.0)) {
        return Err(ExperimentError::Config("need l > 0, r ≥ 0 and r′ > 0".into()));
    }
    let mut hits = 0;
    let mut success = vec![0usize; r_prime_grid.len()];
    for p in ensemble {
        let Some(t0) = tau(p, r) else { continue };
        hits += 1;
        for (k, &rp) in r_prime_grid.iter().enumerate() {
            if let Some(t1) = tau(p, r + rp) {
                if t1 <= t0 + l * rp {
                    success[k] += 1;
                }
            }
        }
    }
    if hits == 0 {
        return Err(ExperimentError::InsufficientHits { hits, radius: r });
    }
    let probability: Vec<f64> = success.iter().map(|&s| s as f64 / hits as f64).collect();
    let mut rep = CrossingReport {
        l,
        r,
        r_prime: r_prime_grid.to_vec(),
        probability,
        hits,
        n_paths: ensemble.len(),
        decay_rate: None,
        log_c1: None,
    };
    if let Some((a, c2)) = rep.decay_fit(1.0) {
        rep.decay_rate = Some(c2);
        rep.log_c1 = Some(a);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loewner::sample_bm;
    use crate::parallel::{ensemble_map, sample_seed};

    #[test]
    fn unit_speed_ray_is_a_step_in_l() {
        let t: Vec<f64> = (0..=1000).map(|i| i as f64 / 100.0).collect();
        let ray = SampledPath::from_real(t.clone(), &t, "ray").unwrap();
        let grid = [0.5, 1.0, 2.0];
        for (l, want) in [(0.9, 0.0), (1.0, 1.0), (1.5, 1.0)] {
            let rep = crossing_time_experiment(std::slice::from_ref(&ray), l, 2.0, &grid).unwrap();
            assert!(rep.probability.iter().all(|&p| p == want), "l={l}: {:?}", rep.probability);
        }
        assert!(matches!(
            crossing_time_experiment(&[ray], 1.0, 50.0, &grid),
            Err(ExperimentError::InsufficientHits { .. })
        ));
    }

    #[test]
    fn brownian_crossings_decay() {
        let paths = ensemble_map(400, |i| sample_bm(1, 16.0, 16_000, sample_seed(11, i as u64)).unwrap());
        let grid = [0.25, 0.5, 1.0, 1.5, 2.0];
        let rep = crossing_time_experiment(&paths, 0.5, 1.0, &grid).unwrap();
        assert!(rep.decay_rate.unwrap() > 0.0, "{rep:?}");
        assert!(rep.probability.windows(2).all(|w| w[1] <= w[0] + 0.03));
        let (_, c2_sq) = rep.decay_fit(2.0).unwrap();
        assert!(c2_sq > 0.0);
        // longer allowances can only help
        let loose = crossing_time_experiment(&paths, 50.0, 1.0, &grid).unwrap();
        assert!(loose.probability.iter().zip(&rep.probability).all(|(a, b)| a >= b));
        assert!(loose.probability[0] > 0.95);
    }
}
