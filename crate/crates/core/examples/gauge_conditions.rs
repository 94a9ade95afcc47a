//! Structural conditions on the Φ/φ families, the τ integral, and the
//! derived σ and ψ = σ⁻¹.

use sle_lab::gauges::{check_gauge_conditions, log_star, GaugeSet, Growth, SigmaGauge, YoungFn};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let families = [
        ("exp c=1 beta=2", GaugeSet::exp(1.0, 2.0, 0.5)?),
        ("poly p=8 h=u^2", GaugeSet::poly(8.0, 0.5, Growth::Power { q: 2.0 })?),
        // φ = Φ = x³ makes every series term constant
        ("x^3 with phi = Phi", GaugeSet::custom(YoungFn::Power { p: 3.0 }, YoungFn::Power { p: 3.0 }, Growth::default(), 0.5, 2.0, 1)?),
    ];
    for (name, set) in &families {
        let rep = check_gauge_conditions(set);
        println!(
            "{name:>20}: all passed = {:5}  multiplicativity margin {:+.3e}  ratio margin {:+.3e}  series {:.4} (tail {:.1e})",
            rep.all_passed(),
            rep.multiplicativity.worst_margin,
            rep.ratio_monotonicity.worst_margin,
            rep.series.partial_sum,
            rep.series.tail_bound
        );
    }

    let set = families[0].1;
    let sigma = SigmaGauge::new(set)?;
    println!("\n{:>10} {:>12} {:>12} {:>12}", "t", "tau(t)", "ratio", "psi(sigma)");
    for k in [10, 6, 3, 1] {
        let t = 10f64.powi(-k);
        let tau = set.tau_integral(t)?;
        let ratio = tau / (t.sqrt() * log_star(1.0 / t)?.sqrt());
        println!("{t:>10.0e} {tau:>12.4e} {ratio:>12.4} {:>12.6e}", sigma.psi(sigma.sigma(t)));
    }
    Ok(())
}
