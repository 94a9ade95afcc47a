//! ψ-variation of Brownian motion along shrinking meshes, with the
//! optimal partition and the exhaustive oracle on a short path.

use sle_lab::functionals::{psi_variation_exhaustive, psi_variation_seminorm, psi_variation_sum};
use sle_lab::gauges::GaugeSpec;
use sle_lab::loewner::sample_bm;
use sle_lab::paths::SampledPath;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = sample_bm(1, 1.0, 1 << 14, 3)?;
    let gauges = [("taylor", GaugeSpec::Taylor), ("x^2.2", GaugeSpec::Power { p: 2.2 }), ("x^1.8", GaugeSpec::Power { p: 1.8 })];
    println!("{:>6} {:>10} {:>10} {:>10}", "k", gauges[0].0, gauges[1].0, gauges[2].0);
    for k in [6, 8, 10, 12] {
        let delta = 2f64.powi(-k);
        let row: Vec<f64> = gauges.iter().map(|(_, g)| psi_variation_sum(&path, &g.resolve().unwrap(), delta).value).collect();
        println!("{k:>6} {:>10.4} {:>10.4} {:>10.4}", row[0], row[1], row[2]);
    }

    let taylor = GaugeSpec::Taylor.resolve()?;
    let full = psi_variation_sum(&path, &taylor, f64::INFINITY);
    println!("unrestricted Taylor variation {:.4} with {} partition points", full.value, full.partition_indices.len());
    println!("seminorm (least M with sum of psi(|dX|/M) <= 1): {:.4}", psi_variation_seminorm(&path, &taylor, f64::INFINITY));

    let short = SampledPath::new((0..12).map(|i| i as f64 / 11.0).collect(), path.points()[..12].to_vec(), "short")?;
    let sq = |x: f64| x * x;
    println!(
        "n = 12, psi = x^2: DP {:.6e}, enumeration {:.6e}",
        psi_variation_sum(&short, &sq, 0.3).value,
        psi_variation_exhaustive(&short, &sq, 0.3)
    );
    Ok(())
}
