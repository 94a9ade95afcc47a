//! Dyadic slowdown reparametrization and the ψ-variation bound it yields.

use sle_lab::functionals::{psi_variation_scaled, seminorm_at_most, slowdown_reparam};
use sle_lab::gauges::{GaugeFamilySpec, GaugeSpec};
use sle_lab::loewner::sample_bm;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fam = GaugeFamilySpec::exp(1.0, 2.0).with_alpha(0.5);
    let sigma = GaugeSpec::Sigma { gauge: fam.clone() }.resolve()?;
    let psi = GaugeSpec::SigmaInverse { gauge: fam }.resolve()?;
    let path = sample_bm(1, 1.0, 1 << 14, 5)?;

    let r = slowdown_reparam(&path, &sigma, 1.0, 0.5, 14)?;
    println!("T(1) = {:.4}, bound M(2^a+1)T(1)^a = {:.4}, worst modulus margin {:.4}", r.total_time(), r.variation_bound, r.worst_margin);

    let slowed = r.reparametrized(&path);
    let literal = psi_variation_scaled(&slowed, &psi, f64::INFINITY, 1.0);
    let (ok, sum) = seminorm_at_most(&slowed, &psi, f64::INFINITY, r.variation_bound);
    println!("sum of psi(|dX|) on the slowed path: {literal:.4}");
    println!("sum of psi(|dX| / bound): {sum:.4} (<= 1: {ok})");
    Ok(())
}
