//! Probability that a path crosses from radius r to r + r′ within l·r′.

use sle_lab::experiments::crossing_time_experiment;
use sle_lab::loewner::sample_bm;
use sle_lab::parallel::{ensemble_map, sample_seed};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let paths = ensemble_map(2000, |i| sample_bm(1, 4.0, 4096, sample_seed(2, i as u64)).unwrap());
    let grid = [0.1, 0.2, 0.3, 0.4, 0.6];
    let rep = crossing_time_experiment(&paths, 0.5, 0.5, &grid)?;
    for (rp, p) in grid.iter().zip(&rep.probability) {
        println!("r' = {rp:<4} P = {p:.4}");
    }
    println!("{} of {} paths reached r; linear decay rate {:?}", rep.hits, rep.n_paths, rep.decay_rate);
    if let Some((_, c2)) = rep.decay_fit(2.0) {
        println!("decay rate in the (r')^2 form: {c2:.3}");
    }
    Ok(())
}
