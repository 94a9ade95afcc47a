//! Minkowski content profile of an SLE trace and the natural
//! parametrization it induces.

use sle_lab::content::{content_profile, default_levels, natural_reparametrize};
use sle_lab::loewner::{sample_trace, DrivingParams, TraceConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kappa = 8.0 / 3.0;
    let d = 1.0 + kappa / 8.0;
    let params = DrivingParams { kappa, rhos: vec![], u0: vec![], t_max: 0.25, dt: 1e-5, substeps: 16 };
    let trace = sample_trace(&params, &TraceConfig { stride: 10, ..Default::default() }, 7)?;
    let (levels, h) = default_levels(0.01);
    let prof = content_profile(&trace, d, &levels, h)?;
    for (eps, c) in prof.eps_levels.iter().zip(&prof.content) {
        println!("eps = {eps:<6} content = {:.4}", c.last().unwrap());
    }
    println!("extrapolated total content: {:.4}", prof.total());

    let natural = natural_reparametrize(&trace, &prof)?;
    let half = natural.value_at(0.5 * natural.end_time());
    println!("natural time runs to {:.4}; half-content point {:.3} + {:.3}i", natural.end_time(), half.x, half.y);
    Ok(())
}
