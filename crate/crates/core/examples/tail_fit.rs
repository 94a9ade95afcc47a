//! Double-log tail fit on the running supremum of Brownian motion.

use sle_lab::experiments::{linear_grid, tail_fit};
use sle_lab::loewner::sample_bm;
use sle_lab::parallel::{ensemble_map, sample_seed};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sups = ensemble_map(20_000, |i| {
        let p = sample_bm(1, 1.0, 256, sample_seed(1, i as u64)).unwrap();
        p.points().iter().map(|q| q.x.abs()).fold(0.0, f64::max)
    });
    let fit = tail_fit(&sups, &linear_grid(1.5, 3.5, 21))?;
    println!("slope {:.3}, 95% CI [{:.3}, {:.3}], {} of {} grid points used", fit.slope, fit.ci95.0, fit.ci95.1, fit.used.iter().filter(|u| **u).count(), fit.r_grid.len());
    Ok(())
}
