//! Modulus-of-continuity ratio and the dyadic-shell LIL statistic on
//! Brownian motion.

use sle_lab::functionals::{lil_statistic, moc_ratio};
use sle_lab::gauges::GaugeSpec;
use sle_lab::loewner::sample_bm;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = sample_bm(1, 1.0, 1 << 16, 11)?;
    // Lévy's modulus √(2 s log(1/s)) corresponds to ω with d = 2 up to constants
    let omega = GaugeSpec::Omega { d: 2.0 }.resolve()?;
    for k in [4, 8, 12] {
        let delta = 2f64.powi(-k);
        println!("moc ratio, delta = 2^-{k}: {:.4}", moc_ratio(&path, &omega, delta));
    }

    let lil = GaugeSpec::BrownianLil { c: 1.0 }.resolve()?;
    let r = lil_statistic(&path, &lil, 3, 14);
    println!("LIL statistic over shells 3..14: overall {:.4}, empty shells {:?}", r.overall, r.empty_shells);
    for s in r.shells.iter().take(4) {
        println!("  shell {:>2}: max {:?} from {} samples", s.k, s.max.map(|m| (m * 1e4).round() / 1e4), s.samples);
    }
    Ok(())
}
