//! Event frequencies behind the Markov lower bound, at the √ε calibration.

use sle_lab::experiments::{markov_lil_experiment, BrownianSampler, MarkovLilConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = MarkovLilConfig::brownian_calibrated(vec![1e-2, 1e-3, 1e-4], 200, 4);
    let rep = markov_lil_experiment(&BrownianSampler { dim: 1 }, &cfg)?;
    for (e, f) in rep.eps.iter().zip(&rep.union_frequency) {
        println!("eps = {e:<7} union frequency {f:.3}");
    }
    println!("monotone {}, mean shell events per run {:.2}", rep.monotone, rep.mean_shell_count);
    Ok(())
}
