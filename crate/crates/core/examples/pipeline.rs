//! A config-driven run: simulate, evaluate functionals, aggregate.

use sle_lab::experiments::{regularity_pipeline, PipelineConfig};

const CONFIG: &str = r#"
master_seed = 1
samples = 8

[process]
kind = "bm"
steps = 8192

[[functionals]]
kind = "psivar"
gauge = { family = "taylor" }
deltas = [0.00390625, 0.0009765625]

[[functionals]]
kind = "lil"
gauge = { family = "brownian_lil" }
k_min = 3
k_max = 11

[[functionals]]
kind = "packing"
radii = [0.1]
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = PipelineConfig::parse(CONFIG)?;
    let rep = regularity_pipeline(&cfg)?;
    for row in &rep.summary {
        println!("{:<36} n={:<3} median {:.4}  IQR [{:.4}, {:.4}]", row.metric, row.n, row.median, row.q1, row.q3);
    }
    let dir = std::env::temp_dir().join("sle-lab-pipeline-example");
    rep.write_to_dir(&dir)?;
    println!("wrote {}", dir.display());
    Ok(())
}
