//! Growth of the Minkowski content of SLE_{8/3} up to hitting radii, and
//! the lower tail of its reciprocal.

use sle_lab::experiments::{content_scaling_experiment, ContentScalingConfig, TailFitConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let traces = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(12);
    let cfg = ContentScalingConfig {
        kappa: 8.0 / 3.0,
        traces,
        t_max: 1.0,
        dt: 1e-5,
        stride: 20,
        eps_min: 0.03,
        r_factors: vec![0.4, 0.6, 0.9],
        scale_quantile: 0.1,
        master_seed: 0,
    };
    let rep = content_scaling_experiment(&cfg)?;
    for ((r, c), n) in rep.radii.iter().zip(&rep.median_content).zip(&rep.reached) {
        println!("r = {r:.3}: median content {c:.4} over {n} traces");
    }
    println!("slope {:.3} (d = {:.3})", rep.slope, rep.d);
    match rep.inverse_content_tail(rep.radii[1], 12, &TailFitConfig::default()) {
        Ok(t) => println!("tail slope of 1/Cont: {:.3} CI [{:.3}, {:.3}]", t.slope, t.ci95.0, t.ci95.1),
        Err(e) => println!("tail fit unavailable at this ensemble size: {e}"),
    }
    Ok(())
}
