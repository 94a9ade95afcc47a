//! Greedy Vitali extraction of intervals with large increments.

use sle_lab::functionals::vitali_extract;
use sle_lab::gauges::GaugeSpec;
use sle_lab::loewner::sample_bm;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sigma = GaugeSpec::BrownianLil { c: 0.25 }.resolve()?;
    for seed in 0..4 {
        let path = sample_bm(1, 1.0, 1 << 16, seed)?;
        let r = vitali_extract(&path, &sigma, 0.01, 0.01);
        println!(
            "seed {seed}: {} intervals, coverage {:.4}, sum psi(|dX|) {:.4}",
            r.intervals.len(),
            r.coverage,
            r.gauge_sum
        );
    }
    Ok(())
}
