//! Driving functions, slit-map trace extraction and the interior segment.

use sle_lab::loewner::{interior_segment, sample_driving, trace_from_driving, DrivingPath, TraceConfig};
use sle_lab::paths::point_set_diameter;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // constant driving grows a vertical slit: η(t) = 2i√t
    let flat = DrivingPath::constant(0.0, 1.0, 1e-4)?;
    let cfg = TraceConfig { dt: 1e-4, stride: 100, ..Default::default() };
    let tip = *trace_from_driving(&flat, &cfg)?.points().last().unwrap();
    println!("W = 0, t = 1: tip = {:.5} + {:.5}i (exact 2i)", tip.x, tip.y);

    for (kappa, rhos, u0) in [(8.0 / 3.0, vec![], vec![]), (2.0, vec![2.0], vec![-0.0])] {
        let d = sample_driving(kappa, &rhos, &u0, 1.0, 1e-4, 42)?;
        let gap = d.u.first().map(|u| d.w.iter().zip(u).map(|(w, u)| w - u).fold(f64::INFINITY, f64::min));
        let trace = trace_from_driving(&d, &TraceConfig { dt: 1e-4, stride: 10, ..Default::default() })?;
        let inner = interior_segment(&trace).expect("interior samples");
        println!(
            "kappa = {kappa:.3}, rho = {rhos:?}: {} points, diameter {:.3}, interior part {} points, min W-U {:?}",
            trace.len(),
            point_set_diameter(trace.points()),
            inner.len(),
            gap
        );
    }
    Ok(())
}
