//! Greedy disjoint-ball packing of a trace and the conditional
//! Borel–Cantelli bound.

use sle_lab::functionals::{ball_packing_count, conditional_bc_bound};
use sle_lab::loewner::sample_bm;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = sample_bm(2, 1.0, 1 << 14, 9)?;
    for r in [0.2, 0.1, 0.05, 0.025] {
        println!("radius {r:<6} disjoint balls {}", ball_packing_count(path.points(), r));
    }

    let p_list: Vec<f64> = (1..=40).map(|k| 1.0 / (k as f64 + 1.0)).collect();
    let b = conditional_bc_bound(0.5, 0.8, &p_list)?;
    println!("conditional BC: holds {}, lhs {:.4}, bound {:.4}", b.holds, b.lhs, b.bound);
    Ok(())
}
