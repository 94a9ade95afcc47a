//! Config-driven simulate → reparametrize → evaluate → aggregate runs.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::stats::quantile;
use super::ExperimentError;
use crate::content::{content_profile, default_levels, natural_reparametrize};
use crate::functionals::{
    ball_packing_count, lil_statistic, moc_ratio, psi_variation_seminorm, psi_variation_sum, slowdown_reparam,
    vitali_extract,
};
use crate::gauges::GaugeSpec;
use crate::loewner::{sample_bm, sample_trace, DrivingParams, TraceConfig};
use crate::parallel::{ensemble_map, sample_seed};
use crate::paths::SampledPath;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProcessSpec {
    Bm {
        #[serde(default = "one_usize")]
        dim: usize,
        #[serde(default = "one_f64")]
        t_max: f64,
        steps: usize,
    },
    Sle {
        kappa: f64,
        #[serde(default)]
        rhos: Vec<f64>,
        #[serde(default)]
        u0: Vec<f64>,
        #[serde(default = "one_f64")]
        t_max: f64,
        dt: f64,
        #[serde(default = "one_usize")]
        stride: usize,
    },
}

fn one_usize() -> usize {
    1
}
fn one_f64() -> f64 {
    1.0
}
fn inf_list() -> Vec<f64> {
    vec![f64::INFINITY]
}

impl ProcessSpec {
    pub fn simulate(&self, seed: u64) -> Result<SampledPath, ExperimentError> {
        Ok(match self {
            ProcessSpec::Bm { dim, t_max, steps } => sample_bm(*dim, *t_max, *steps, seed)?,
            ProcessSpec::Sle { kappa, rhos, u0, t_max, dt, stride } => {
                let params = DrivingParams {
                    kappa: *kappa,
                    rhos: rhos.clone(),
                    u0: u0.clone(),
                    t_max: *t_max,
                    dt: *dt,
                    substeps: 16,
                };
                let cfg = TraceConfig { dt: *dt, stride: *stride, ..Default::default() };
                sample_trace(&params, &cfg, seed)?
            }
        })
    }

    /// Content dimension `1 + κ/8` (capped at 2) for SLE; 2 for Brownian motion.
    pub fn default_dimension(&self) -> f64 {
        match self {
            ProcessSpec::Bm { .. } => 2.0,
            ProcessSpec::Sle { kappa, .. } => (1.0 + kappa / 8.0).min(2.0),
        }
    }
}

/// Reparametrization of every path by its Minkowski content.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NaturalSpec {
    pub eps_min: f64,
    #[serde(default)]
    pub d: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionalSpec {
    Psivar {
        gauge: GaugeSpec,
        #[serde(default = "inf_list")]
        deltas: Vec<f64>,
    },
    Seminorm {
        gauge: GaugeSpec,
        #[serde(default = "inf_list")]
        deltas: Vec<f64>,
    },
    Moc {
        gauge: GaugeSpec,
        #[serde(default = "inf_list")]
        deltas: Vec<f64>,
    },
    Lil {
        gauge: GaugeSpec,
        k_min: i32,
        k_max: i32,
    },
    Vitali {
        gauge: GaugeSpec,
        eps: f64,
        s_max: f64,
    },
    Slowdown {
        gauge: GaugeSpec,
        m: f64,
        alpha: f64,
        k_max: u32,
    },
    Packing {
        radii: Vec<f64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    #[serde(default)]
    pub master_seed: u64,
    pub samples: usize,
    pub process: ProcessSpec,
    #[serde(default)]
    pub natural: Option<NaturalSpec>,
    #[serde(default)]
    pub functionals: Vec<FunctionalSpec>,
}

impl PipelineConfig {
    /// Parses TOML, falling back to JSON.
    pub fn parse(text: &str) -> Result<Self, ExperimentError> {
        match toml::from_str(text) {
            Ok(c) => Ok(c),
            Err(te) => serde_json::from_str(text).map_err(|je| ExperimentError::Config(format!("not TOML ({te}) nor JSON ({je})"))),
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        for f in &self.functionals {
            match f {
                FunctionalSpec::Psivar { gauge, deltas } | FunctionalSpec::Seminorm { gauge, deltas } | FunctionalSpec::Moc { gauge, deltas } => {
                    gauge.resolve()?;
                    if deltas.iter().any(|d| !(*d > 0.0)) {
                        return Err(ExperimentError::Config("mesh sizes must be positive".into()));
                    }
                }
                FunctionalSpec::Lil { gauge, .. } | FunctionalSpec::Vitali { gauge, .. } | FunctionalSpec::Slowdown { gauge, .. } => {
                    gauge.resolve()?;
                }
                FunctionalSpec::Packing { radii } => {
                    if radii.iter().any(|r| !(*r > 0.0)) {
                        return Err(ExperimentError::Config("packing radii must be positive".into()));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathRecord {
    pub index: usize,
    pub seed: u64,
    pub span: f64,
    pub metrics: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub metric: String,
    pub n: usize,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub records: Vec<PathRecord>,
    pub summary: Vec<SummaryRow>,
}

impl ExperimentReport {
    pub fn from_records(records: Vec<PathRecord>) -> Self {
        let mut by_metric: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
        for r in &records {
            for (k, v) in &r.metrics {
                by_metric.entry(k).or_default().push(*v);
            }
        }
        let summary = by_metric
            .into_iter()
            .map(|(k, v)| SummaryRow {
                metric: k.to_string(),
                n: v.len(),
                median: quantile(&v, 0.5),
                q1: quantile(&v, 0.25),
                q3: quantile(&v, 0.75),
            })
            .collect();
        ExperimentReport { records, summary }
    }

    pub fn median(&self, metric: &str) -> Option<f64> {
        self.summary.iter().find(|s| s.metric == metric).map(|s| s.median)
    }

    /// One JSON object per path.
    pub fn write_ndjson<W: Write>(&self, mut w: W) -> Result<(), ExperimentError> {
        for r in &self.records {
            serde_json::to_writer(&mut w, r).map_err(|e| ExperimentError::Io(e.to_string()))?;
            w.write_all(b"\n").map_err(|e| ExperimentError::Io(e.to_string()))?;
        }
        Ok(())
    }

    pub fn write_summary_csv<W: Write>(&self, w: W) -> Result<(), ExperimentError> {
        let mut c = csv::Writer::from_writer(w);
        for s in &self.summary {
            c.serialize(s).map_err(|e| ExperimentError::Io(e.to_string()))?;
        }
        c.flush().map_err(|e| ExperimentError::Io(e.to_string()))
    }

    /// `report.ndjson` and `summary.csv` inside `dir`.
    pub fn write_to_dir(&self, dir: &Path) -> Result<(), ExperimentError> {
        let io = |e: std::io::Error| ExperimentError::Io(e.to_string());
        std::fs::create_dir_all(dir).map_err(io)?;
        self.write_ndjson(std::io::BufWriter::new(std::fs::File::create(dir.join("report.ndjson")).map_err(io)?))?;
        // the csv header is written even when there are no rows
        if self.summary.is_empty() {
            std::fs::write(dir.join("summary.csv"), "metric,n,median,q1,q3\n").map_err(io)?;
            return Ok(());
        }
        self.write_summary_csv(std::fs::File::create(dir.join("summary.csv")).map_err(io)?)
    }
}

/// Metrics of one functional on one path.
pub fn evaluate_functional(path: &SampledPath, spec: &FunctionalSpec, out: &mut BTreeMap<String, f64>) -> Result<(), ExperimentError> {
    let span = path.span().len();
    match spec {
        FunctionalSpec::Psivar { gauge, deltas } => {
            let g = gauge.resolve()?;
            for &d in deltas {
                let v = psi_variation_sum(path, &g, d).value;
                out.insert(format!("psivar[delta={d}]"), v);
                out.insert(format!("psivar_per_len[delta={d}]"), v / span);
            }
        }
        FunctionalSpec::Seminorm { gauge, deltas } => {
            let g = gauge.resolve()?;
            for &d in deltas {
                out.insert(format!("seminorm[delta={d}]"), psi_variation_seminorm(path, &g, d));
            }
        }
        FunctionalSpec::Moc { gauge, deltas } => {
            let g = gauge.resolve()?;
            for &d in deltas {
                out.insert(format!("moc[delta={d}]"), moc_ratio(path, &g, d));
            }
        }
        FunctionalSpec::Lil { gauge, k_min, k_max } => {
            let g = gauge.resolve()?;
            let r = lil_statistic(path, &g, *k_min, *k_max);
            out.insert("lil_overall".into(), r.overall);
            out.insert("lil_empty_shells".into(), r.empty_shells.len() as f64);
        }
        FunctionalSpec::Vitali { gauge, eps, s_max } => {
            let g = gauge.resolve()?;
            let r = vitali_extract(path, &g, *eps, *s_max);
            out.insert("vitali_coverage".into(), r.coverage);
            out.insert("vitali_gauge_sum".into(), r.gauge_sum);
            out.insert("vitali_intervals".into(), r.intervals.len() as f64);
        }
        FunctionalSpec::Slowdown { gauge, m, alpha, k_max } => {
            let g = gauge.resolve()?;
            let r = slowdown_reparam(path, &g, *m, *alpha, *k_max)?;
            out.insert("slowdown_bound".into(), r.variation_bound);
            out.insert("slowdown_total_time".into(), r.total_time());
            out.insert("slowdown_margin".into(), r.worst_margin);
        }
        FunctionalSpec::Packing { radii } => {
            for &r in radii {
                out.insert(format!("packing[r={r}]"), ball_packing_count(path.points(), r) as f64);
            }
        }
    }
    Ok(())
}

fn run_one(config: &PipelineConfig, index: usize) -> Result<PathRecord, ExperimentError> {
    let seed = sample_seed(config.master_seed, index as u64);
    let tag = |e: ExperimentError| ExperimentError::AtSample { index, seed, source: Box::new(e) };
    let mut path = config.process.simulate(seed).map_err(tag)?;
    if let Some(nat) = &config.natural {
        let d = nat.d.unwrap_or_else(|| config.process.default_dimension());
        let (levels, h) = default_levels(nat.eps_min);
        let prof = content_profile(&path, d, &levels, h).map_err(|e| tag(e.into()))?;
        path = natural_reparametrize(&path, &prof).map_err(|e| tag(e.into()))?;
    }
    let mut metrics = BTreeMap::new();
    for f in &config.functionals {
        evaluate_functional(&path, f, &mut metrics).map_err(tag)?;
    }
    Ok(PathRecord { index, seed, span: path.span().len(), metrics })
}

/// Runs the whole ensemble; records are ordered by sample index, so output
/// depends only on `(config, master_seed)`.
pub fn regularity_pipeline(config: &PipelineConfig) -> Result<ExperimentReport, ExperimentError> {
    config.validate()?;
    let results = ensemble_map(config.samples, |i| run_one(config, i));
    let records = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(ExperimentReport::from_records(records))
}
