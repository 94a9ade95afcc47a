//! Exact Brownian motion on a uniform grid, the oracle process.

use rand_distr::{Distribution, StandardNormal};

use super::LoewnerError;
use crate::parallel::rng_from_seed;
use crate::paths::{Point, SampledPath};

/// Brownian motion in dimension 1 or 2 on `[0, T]` with `n` Gaussian
/// increments of variance `T/n` per coordinate, started at 0.
pub fn sample_bm(dim: usize, t_max: f64, n: usize, seed: u64) -> Result<SampledPath, LoewnerError> {
    if dim != 1 && dim != 2 {
        return Err(LoewnerError::InvalidParameter(format!("dimension {dim} is not 1 or 2")));
    }
    if n == 0 || !(t_max > 0.0 && t_max.is_finite()) {
        return Err(LoewnerError::InvalidParameter("need n ≥ 1 and T > 0".into()));
    }
    let mut rng = rng_from_seed(seed);
    let sd = (t_max / n as f64).sqrt();
    let mut times = Vec::with_capacity(n + 1);
    let mut points = Vec::with_capacity(n + 1);
    let mut p = Point::ORIGIN;
    times.push(0.0);
    points.push(p);
    for k in 1..=n {
        let dx: f64 = StandardNormal.sample(&mut rng);
        p.x += sd * dx;
        if dim == 2 {
            let dy: f64 = StandardNormal.sample(&mut rng);
            p.y += sd * dy;
        }
        times.push(t_max * k as f64 / n as f64);
        points.push(p);
    }
    SampledPath::new(times, points, format!("bm dim={dim} seed={seed}"))
        .map_err(|e| LoewnerError::InvalidParameter(e.to_string()))
}
