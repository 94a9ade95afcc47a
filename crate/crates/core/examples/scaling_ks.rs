//! Self-similarity check by a two-sample KS test.

use sle_lab::experiments::scaling_check;
use sle_lab::loewner::sample_bm;
use sle_lab::parallel::{ensemble_map, sample_seed};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let paths = ensemble_map(1000, |i| sample_bm(1, 1.0, 256, sample_seed(3, i as u64)).unwrap());
    for d in [2.0, 3.0] {
        let r = scaling_check(&paths, 4.0, d, 0.25)?;
        println!("index 1/{d}: KS {:.4}, p-value {:.3e}", r.ks, r.p_value);
    }
    Ok(())
}
