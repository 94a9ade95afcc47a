//! Command-line front end. Every subcommand writes `report.ndjson` (one
//! object per path, run or grid point) and `summary.csv` into its output
//! directory; subcommands whose `--out` names a file use that file's
//! directory.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::content::{content_profile, default_levels, natural_reparametrize};
use crate::experiments::stats::quantile;
use crate::experiments::{
    crossing_time_experiment, evaluate_functional, linear_grid, markov_lil_experiment, regularity_pipeline,
    scaling_check, tail_fit_with, BrownianSampler, ExperimentError, ExperimentReport, FunctionalSpec,
    MarkovLilConfig, PathRecord, PipelineConfig, ProcessSpec, SummaryRow, TailFitConfig,
};
use crate::gauges::GaugeSpec;
use crate::parallel::{configured_threads, ensemble_map, sample_seed, THREADS_ENV};
use crate::paths::SampledPath;

#[derive(Debug, Parser)]
#[command(name = "sle-lab", version, about = "SLE traces, Minkowski content and sharp path-regularity functionals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample SLE_κ(ρ) traces (or Brownian paths) to CSV files.
    Simulate(SimulateArgs),
    /// Minkowski content profiles and natural reparametrization.
    Content(ContentArgs),
    /// Evaluate one functional on path files.
    Functional(FunctionalArgs),
    /// Double-log tail fit of a sample file.
    Tailfit(TailfitArgs),
    /// Fast-crossing probabilities between hitting radii.
    Crossing(CrossingArgs),
    /// Kolmogorov–Smirnov self-similarity check.
    Scaling(ScalingArgs),
    /// Event frequencies of the Markov lower-bound scheme.
    MarkovLil(MarkovLilArgs),
    /// Config-driven simulate → reparametrize → evaluate run.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 8.0 / 3.0)]
    pub kappa: f64,
    /// Force-point weights (repeat the flag or separate by commas).
    #[arg(long = "rho", value_delimiter = ',', allow_negative_numbers = true)]
    pub rho: Vec<f64>,
    /// Initial force points; `0-` and `0+` are the one-sided limits at the
    /// seed. Defaults to `0+` for every weight.
    #[arg(long = "u0", value_delimiter = ',', allow_hyphen_values = true)]
    pub u0: Vec<String>,
    /// Capacity horizon (time horizon for Brownian motion).
    #[arg(long = "T", default_value_t = 1.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 1e-5)]
    pub dt: f64,
    /// Keep every `stride`-th driving step of the trace.
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    #[arg(long, default_value_t = 1)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Brownian motion with this many steps instead of SLE.
    #[arg(long)]
    pub bm_steps: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ContentArgs {
    #[arg(long = "in", num_args = 1.., required = true)]
    pub inputs: Vec<PathBuf>,
    /// Content dimension.
    #[arg(long)]
    pub d: f64,
    #[arg(long, default_value_t = 0.02)]
    pub eps_min: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FunctionalKind {
    Psivar,
    Seminorm,
    Moc,
    Lil,
    Vitali,
    Slowdown,
    Packing,
}

#[derive(Debug, Args)]
pub struct FunctionalArgs {
    #[arg(long, value_enum)]
    pub kind: FunctionalKind,
    /// JSON, TOML or `name:key=value,…` (e.g. `taylor`, `power:p=2`).
    #[arg(long)]
    pub gauge: Option<String>,
    /// Mesh sizes; `inf` for the unrestricted supremum.
    #[arg(long, num_args = 1.., default_values_t = [f64::INFINITY])]
    pub delta: Vec<f64>,
    #[arg(long = "in", num_args = 1.., required = true)]
    pub inputs: Vec<PathBuf>,
    /// Result file (JSON).
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 3, allow_negative_numbers = true)]
    pub k_min: i32,
    #[arg(long, default_value_t = 20, allow_negative_numbers = true)]
    pub k_max: i32,
    /// Vitali threshold and largest interval length.
    #[arg(long, default_value_t = 0.01)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.01)]
    pub s_max: f64,
    /// Slowdown amplitude, exponent and dyadic depth.
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 16)]
    pub levels: u32,
    /// Packing radii.
    #[arg(long, num_args = 1.., default_values_t = [0.05])]
    pub radius: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct TailfitArgs {
    /// One value per line, or a CSV whose first column holds the values.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Grid `lo:hi:n`; defaults to 20 points from the median to the
    /// `1 − 5/n` quantile.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long, default_value_t = 200)]
    pub resamples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fit file (JSON).
    #[arg(long)]
    pub out: PathBuf,
}

/// Where an ensemble comes from: path files, or freshly simulated
/// Brownian motion.
#[derive(Debug, Args)]
pub struct EnsembleArgs {
    /// Path CSVs, or directories whose `*.csv` files are read in name order.
    #[arg(long = "in", num_args = 1..)]
    pub inputs: Vec<PathBuf>,
    /// Simulate this many Brownian paths instead.
    #[arg(long)]
    pub bm: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    #[arg(long, default_value_t = 4096)]
    pub steps: usize,
    #[arg(long = "T", default_value_t = 1.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CrossingArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long)]
    pub l: f64,
    #[arg(long)]
    pub r: f64,
    #[arg(long = "r-prime", num_args = 1.., required = true)]
    pub r_prime: Vec<f64>,
    /// Exponent `q` of the `(r′)^q` decay fit reported alongside the linear one.
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long)]
    pub d: f64,
    #[arg(long)]
    pub t_probe: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MarkovLilArgs {
    /// TOML or JSON config; overrides the flags below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 2.0)]
    pub d_w: f64,
    #[arg(long, default_value_t = 1.0)]
    pub a0: f64,
    #[arg(long, num_args = 1.., default_values_t = [1e-2, 1e-3, 1e-4])]
    pub eps: Vec<f64>,
    #[arg(long, default_value_t = 500)]
    pub runs: usize,
    #[arg(long, default_value_t = 30)]
    pub k_max: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Dimension of the Brownian sampler.
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

/// 2 for configuration errors, 3 for numerical failures.
pub fn exit_code(e: &ExperimentError) -> u8 {
    if e.is_config_error() || matches!(e, ExperimentError::Io(_)) {
        2
    } else {
        3
    }
}

pub fn run(cli: Cli) -> Result<(), ExperimentError> {
    if std::env::var_os(THREADS_ENV).is_some() && configured_threads().is_none() {
        return Err(ExperimentError::Config(format!("{THREADS_ENV} must be a positive integer")));
    }
    match cli.command {
        Command::Simulate(a) => simulate(&a),
        Command::Content(a) => content(&a),
        Command::Functional(a) => functional(&a),
        Command::Tailfit(a) => tailfit(&a),
        Command::Crossing(a) => crossing(&a),
        Command::Scaling(a) => scaling(&a),
        Command::MarkovLil(a) => markov_lil(&a),
        Command::Pipeline(a) => pipeline(&a),
    }
}

fn io(e: impl std::fmt::Display) -> ExperimentError {
    ExperimentError::Io(e.to_string())
}

fn config(m: impl Into<String>) -> ExperimentError {
    ExperimentError::Config(m.into())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), ExperimentError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io)?;
    }
    let mut w = BufWriter::new(fs::File::create(path).map_err(io)?);
    serde_json::to_writer_pretty(&mut w, value).map_err(io)?;
    w.write_all(b"\n").map_err(io)
}

fn parent_dir(file: &Path) -> PathBuf {
    match file.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    }
}

/// A scalar result in the `summary.csv` layout.
fn scalar_row(metric: impl Into<String>, n: usize, v: f64) -> SummaryRow {
    SummaryRow { metric: metric.into(), n, median: v, q1: v, q3: v }
}

fn report_with(records: Vec<PathRecord>, extra: Vec<SummaryRow>) -> ExperimentReport {
    let mut rep = ExperimentReport::from_records(records);
    rep.summary.extend(extra);
    rep
}

fn read_path(file: &Path) -> Result<SampledPath, ExperimentError> {
    let f = fs::File::open(file).map_err(|e| config(format!("{}: {e}", file.display())))?;
    SampledPath::read_csv(std::io::BufReader::new(f), file.display().to_string())
        .map_err(|e| config(format!("{}: {e}", file.display())))
}

/// Expands directories into their `*.csv` files, sorted by name.
fn expand_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, ExperimentError> {
    let mut out = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut files: Vec<PathBuf> = fs::read_dir(p)
                .map_err(|e| config(format!("{}: {e}", p.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "csv"))
                .collect();
            files.sort();
            out.extend(files);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

struct Member {
    seed: u64,
    path: SampledPath,
}

fn load_ensemble(a: &EnsembleArgs) -> Result<Vec<Member>, ExperimentError> {
    if let Some(n) = a.bm {
        if !a.inputs.is_empty() {
            return Err(config("give either --in or --bm, not both"));
        }
        let spec = ProcessSpec::Bm { dim: a.dim, t_max: a.t_max, steps: a.steps };
        return ensemble_map(n, |i| {
            let seed = sample_seed(a.seed, i as u64);
            spec.simulate(seed).map(|path| Member { seed, path })
        })
        .into_iter()
        .collect();
    }
    let files = expand_inputs(&a.inputs)?;
    if files.is_empty() {
        return Err(config("no input paths"));
    }
    files
        .iter()
        .map(|f| read_path(f).map(|path| Member { seed: 0, path }))
        .collect()
}

fn parse_u0(s: &str) -> Result<f64, ExperimentError> {
    match s.trim() {
        "0-" | "0⁻" => Ok(-0.0),
        "0+" | "0⁺" => Ok(0.0),
        t => t.parse().map_err(|_| config(format!("force point `{s}` is not a number, 0- or 0+"))),
    }
}

fn simulate(a: &SimulateArgs) -> Result<(), ExperimentError> {
    let spec = match a.bm_steps {
        Some(steps) => ProcessSpec::Bm { dim: a.dim, t_max: a.t_max, steps },
        None => {
            let u0 = if a.u0.is_empty() {
                vec![0.0; a.rho.len()]
            } else {
                a.u0.iter().map(|s| parse_u0(s)).collect::<Result<_, _>>()?
            };
            if u0.len() != a.rho.len() {
                return Err(config("need one --u0 per --rho"));
            }
            ProcessSpec::Sle { kappa: a.kappa, rhos: a.rho.clone(), u0, t_max: a.t_max, dt: a.dt, stride: a.stride }
        }
    };
    fs::create_dir_all(&a.out).map_err(io)?;
    let mut manifest = BufWriter::new(fs::File::create(a.out.join("manifest.ndjson")).map_err(io)?);
    let mut records = Vec::with_capacity(a.samples);
    // bounded batches keep long traces from piling up in memory
    const BATCH: usize = 32;
    for start in (0..a.samples).step_by(BATCH) {
        let end = (start + BATCH).min(a.samples);
        let batch = ensemble_map(end - start, |j| {
            let i = start + j;
            let seed = sample_seed(a.seed, i as u64);
            spec.simulate(seed).map_err(|e| ExperimentError::AtSample { index: i, seed, source: Box::new(e) })
        });
        for (j, path) in batch.into_iter().enumerate() {
            let path = path?;
            let i = start + j;
            let seed = sample_seed(a.seed, i as u64);
            let file = format!("trace_{i:05}.csv");
            path.write_csv(BufWriter::new(fs::File::create(a.out.join(&file)).map_err(io)?))?;
            let entry = match &spec {
                ProcessSpec::Sle { kappa, rhos, u0, t_max, dt, stride } => serde_json::json!({
                    "index": i, "seed": seed, "file": file, "kappa": kappa, "rho": rhos,
                    "u0": u0.iter().map(|u| if *u == 0.0 { if u.is_sign_negative() { "0-".to_string() } else { "0+".to_string() } } else { u.to_string() }).collect::<Vec<_>>(),
                    "dt": dt, "T": t_max, "stride": stride, "points": path.len(),
                }),
                ProcessSpec::Bm { dim, t_max, steps } => serde_json::json!({
                    "index": i, "seed": seed, "file": file, "process": "bm", "dim": dim, "T": t_max, "steps": steps,
                }),
            };
            serde_json::to_writer(&mut manifest, &entry).map_err(io)?;
            manifest.write_all(b"\n").map_err(io)?;
            let tip = *path.points().last().unwrap();
            let sup = path.points().iter().map(|p| p.norm()).fold(0.0, f64::max);
            let metrics = BTreeMap::from([
                ("points".to_string(), path.len() as f64),
                ("sup_norm".into(), sup),
                ("tip_x".into(), tip.x),
                ("tip_y".into(), tip.y),
            ]);
            records.push(PathRecord { index: i, seed, span: path.span().len(), metrics });
        }
    }
    manifest.flush().map_err(io)?;
    ExperimentReport::from_records(records).write_to_dir(&a.out)
}

fn content(a: &ContentArgs) -> Result<(), ExperimentError> {
    let files = expand_inputs(&a.inputs)?;
    let (levels, h) = default_levels(a.eps_min);
    fs::create_dir_all(&a.out).map_err(io)?;
    let mut records = Vec::new();
    for (i, f) in files.iter().enumerate() {
        let path = read_path(f)?;
        let prof = content_profile(&path, a.d, &levels, h)?;
        let stem = f.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| format!("path{i}"));
        prof.write_csv(BufWriter::new(fs::File::create(a.out.join(format!("{stem}_profile.csv"))).map_err(io)?))?;
        let natural = natural_reparametrize(&path, &prof)?;
        natural.write_csv(BufWriter::new(fs::File::create(a.out.join(format!("{stem}_natural.csv"))).map_err(io)?))?;
        let finest = *prof.finest().last().unwrap_or(&0.0);
        let metrics = BTreeMap::from([
            ("content".to_string(), prof.total()),
            ("content_finest_level".into(), finest),
            ("points".into(), path.len() as f64),
        ]);
        records.push(PathRecord { index: i, seed: 0, span: path.span().len(), metrics });
    }
    ExperimentReport::from_records(records).write_to_dir(&a.out)
}

fn functional_spec(a: &FunctionalArgs) -> Result<FunctionalSpec, ExperimentError> {
    let gauge = || -> Result<GaugeSpec, ExperimentError> {
        let text = a.gauge.as_deref().ok_or_else(|| config("--gauge is required for this kind"))?;
        Ok(GaugeSpec::parse(text)?)
    };
    let deltas = a.delta.clone();
    Ok(match a.kind {
        FunctionalKind::Psivar => FunctionalSpec::Psivar { gauge: gauge()?, deltas },
        FunctionalKind::Seminorm => FunctionalSpec::Seminorm { gauge: gauge()?, deltas },
        FunctionalKind::Moc => FunctionalSpec::Moc { gauge: gauge()?, deltas },
        FunctionalKind::Lil => FunctionalSpec::Lil { gauge: gauge()?, k_min: a.k_min, k_max: a.k_max },
        FunctionalKind::Vitali => FunctionalSpec::Vitali { gauge: gauge()?, eps: a.eps, s_max: a.s_max },
        FunctionalKind::Slowdown => FunctionalSpec::Slowdown { gauge: gauge()?, m: a.m, alpha: a.alpha, k_max: a.levels },
        FunctionalKind::Packing => FunctionalSpec::Packing { radii: a.radius.clone() },
    })
}

#[derive(Serialize)]
struct FunctionalResult<'a> {
    spec: &'a FunctionalSpec,
    results: Vec<FunctionalEntry>,
}

#[derive(Serialize)]
struct FunctionalEntry {
    input: String,
    metrics: BTreeMap<String, f64>,
}

fn functional(a: &FunctionalArgs) -> Result<(), ExperimentError> {
    let spec = functional_spec(a)?;
    let probe = PipelineConfig {
        master_seed: 0,
        samples: 0,
        process: ProcessSpec::Bm { dim: 1, t_max: 1.0, steps: 1 },
        natural: None,
        functionals: vec![spec.clone()],
    };
    probe.validate()?;
    let files = expand_inputs(&a.inputs)?;
    let paths = files.iter().map(|f| read_path(f)).collect::<Result<Vec<_>, _>>()?;
    let evaluated = ensemble_map(paths.len(), |i| {
        let mut m = BTreeMap::new();
        evaluate_functional(&paths[i], &spec, &mut m)
            .map(|()| m)
            .map_err(|e| ExperimentError::AtSample { index: i, seed: 0, source: Box::new(e) })
    });
    let mut results = Vec::new();
    let mut records = Vec::new();
    for (i, m) in evaluated.into_iter().enumerate() {
        let m = m?;
        records.push(PathRecord { index: i, seed: 0, span: paths[i].span().len(), metrics: m.clone() });
        results.push(FunctionalEntry { input: files[i].display().to_string(), metrics: m });
    }
    write_json(&a.out, &FunctionalResult { spec: &spec, results })?;
    ExperimentReport::from_records(records).write_to_dir(&parent_dir(&a.out))
}

fn read_samples(file: &Path) -> Result<Vec<f64>, ExperimentError> {
    let text = fs::read_to_string(file).map_err(|e| config(format!("{}: {e}", file.display())))?;
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let field = line.split(',').next().unwrap_or("").trim();
        if field.is_empty() {
            continue;
        }
        match field.parse::<f64>() {
            Ok(v) => out.push(v),
            // a header line is allowed
            Err(_) if ln == 0 => {}
            Err(_) => return Err(config(format!("{}:{}: `{field}` is not a number", file.display(), ln + 1))),
        }
    }
    Ok(out)
}

fn parse_grid(s: &str) -> Result<Vec<f64>, ExperimentError> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || config(format!("grid `{s}` is not lo:hi:n"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !(lo < hi) || n < 2 {
        return Err(bad());
    }
    Ok(linear_grid(lo, hi, n))
}

fn tailfit(a: &TailfitArgs) -> Result<(), ExperimentError> {
    let samples = read_samples(&a.input)?;
    let grid = match &a.grid {
        Some(g) => parse_grid(g)?,
        None if samples.is_empty() => vec![],
        None => linear_grid(quantile(&samples, 0.5), quantile(&samples, 1.0 - 5.0 / samples.len() as f64), 20),
    };
    let cfg = TailFitConfig { resamples: a.resamples, seed: a.seed };
    let fit = tail_fit_with(&samples, &grid, &cfg)?;
    write_json(&a.out, &fit)?;
    let records = (0..fit.r_grid.len())
        .map(|k| PathRecord {
            index: k,
            seed: a.seed,
            span: 0.0,
            metrics: BTreeMap::from([
                ("r".to_string(), fit.r_grid[k]),
                ("survival".into(), fit.survival[k]),
                ("used".into(), if fit.used[k] { 1.0 } else { 0.0 }),
            ]),
        })
        .collect();
    let n = fit.n_samples;
    let extra = vec![
        scalar_row("slope", n, fit.slope),
        scalar_row("intercept", n, fit.intercept),
        scalar_row("ci95_lo", n, fit.ci95.0),
        scalar_row("ci95_hi", n, fit.ci95.1),
    ];
    report_with(records, extra).write_to_dir(&parent_dir(&a.out))
}

fn crossing(a: &CrossingArgs) -> Result<(), ExperimentError> {
    let members = load_ensemble(&a.ensemble)?;
    let paths: Vec<SampledPath> = members.iter().map(|m| m.path.clone()).collect();
    let rep = crossing_time_experiment(&paths, a.l, a.r, &a.r_prime)?;
    let qfit = rep.decay_fit(a.q);
    fs::create_dir_all(&a.out).map_err(io)?;
    write_json(
        &a.out.join("crossing.json"),
        &serde_json::json!({ "report": rep, "q": a.q, "q_fit": qfit.map(|(c, r)| serde_json::json!({"log_c1": c, "decay_rate": r})) }),
    )?;
    let records = members
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let mut metrics = BTreeMap::new();
            if let Some(t) = m.path.hitting_time(a.r) {
                metrics.insert(format!("tau[r={}]", a.r), t);
            }
            for rp in &a.r_prime {
                if let Some(t) = m.path.hitting_time(a.r + rp) {
                    metrics.insert(format!("tau[r={}]", a.r + rp), t);
                }
            }
            PathRecord { index: i, seed: m.seed, span: m.path.span().len(), metrics }
        })
        .collect();
    let mut extra: Vec<SummaryRow> =
        rep.r_prime.iter().zip(&rep.probability).map(|(rp, p)| scalar_row(format!("probability[r'={rp}]"), rep.hits, *p)).collect();
    if let Some(c2) = rep.decay_rate {
        extra.push(scalar_row("decay_rate", rep.hits, c2));
    }
    report_with(records, extra).write_to_dir(&a.out)
}

fn scaling(a: &ScalingArgs) -> Result<(), ExperimentError> {
    let members = load_ensemble(&a.ensemble)?;
    let paths: Vec<SampledPath> = members.iter().map(|m| m.path.clone()).collect();
    let rep = scaling_check(&paths, a.lambda, a.d, a.t_probe)?;
    fs::create_dir_all(&a.out).map_err(io)?;
    write_json(&a.out.join("scaling.json"), &rep)?;
    let k = a.lambda.powf(1.0 / a.d);
    let records = members
        .iter()
        .enumerate()
        .filter(|(_, m)| m.path.end_time() - m.path.start_time() >= a.t_probe.max(a.lambda * a.t_probe))
        .map(|(i, m)| {
            let (t0, x0) = (m.path.start_time(), m.path.points()[0]);
            let metrics = BTreeMap::from([
                ("abs_at_lambda_t".to_string(), m.path.value_at(t0 + a.lambda * a.t_probe).dist(x0)),
                ("rescaled_abs_at_t".into(), k * m.path.value_at(t0 + a.t_probe).dist(x0)),
            ]);
            PathRecord { index: i, seed: m.seed, span: m.path.span().len(), metrics }
        })
        .collect();
    let extra = vec![scalar_row("ks", rep.n, rep.ks), scalar_row("p_value", rep.n, rep.p_value)];
    report_with(records, extra).write_to_dir(&a.out)
}

fn markov_lil(a: &MarkovLilArgs) -> Result<(), ExperimentError> {
    let cfg = match &a.config {
        Some(file) => {
            let text = fs::read_to_string(file).map_err(|e| config(format!("{}: {e}", file.display())))?;
            toml::from_str::<MarkovLilConfig>(&text)
                .or_else(|te| serde_json::from_str(&text).map_err(|je| config(format!("not TOML ({te}) nor JSON ({je})"))))?
        }
        None => MarkovLilConfig { d_w: a.d_w, a0: a.a0, eps_list: a.eps.clone(), runs: a.runs, k_max: a.k_max, master_seed: a.seed },
    };
    if !(a.dim == 1 || a.dim == 2) {
        return Err(config("--dim must be 1 or 2"));
    }
    let rep = markov_lil_experiment(&BrownianSampler { dim: a.dim }, &cfg)?;
    fs::create_dir_all(&a.out).map_err(io)?;
    write_json(&a.out.join("markov.json"), &serde_json::json!({ "config": cfg, "report": rep }))?;
    let records = rep
        .shell_counts
        .iter()
        .enumerate()
        .map(|(i, c)| PathRecord {
            index: i,
            seed: cfg.master_seed,
            span: 1.0,
            metrics: BTreeMap::from([("shell_events".to_string(), *c as f64)]),
        })
        .collect();
    let mut extra: Vec<SummaryRow> =
        rep.eps.iter().zip(&rep.union_frequency).map(|(e, f)| scalar_row(format!("union_frequency[eps={e}]"), cfg.runs, *f)).collect();
    extra.push(scalar_row("monotone", cfg.runs, if rep.monotone { 1.0 } else { 0.0 }));
    report_with(records, extra).write_to_dir(&a.out)
}

fn pipeline(a: &PipelineArgs) -> Result<(), ExperimentError> {
    let text = fs::read_to_string(&a.config).map_err(|e| config(format!("{}: {e}", a.config.display())))?;
    let cfg = PipelineConfig::parse(&text)?;
    regularity_pipeline(&cfg)?.write_to_dir(&a.out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("sle-lab").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn grid_and_force_point_syntax() {
        assert_eq!(parse_grid("1:3:3").unwrap(), vec![1.0, 2.0, 3.0]);
        assert!(parse_grid("3:1:3").is_err() && parse_grid("1:2").is_err());
        assert!(parse_u0("0-").unwrap().is_sign_negative());
        assert!(parse_u0("0+").unwrap().is_sign_positive());
        assert_eq!(parse_u0("-1.5").unwrap(), -1.5);
        assert!(parse_u0("left").is_err());
    }

    #[test]
    fn functional_flags() {
        let c = parse(&["functional", "--kind", "psivar", "--gauge", "taylor", "--delta", "0.01", "inf", "--in", "a.csv", "--out", "r.json"]);
        let Command::Functional(a) = c.command else { panic!() };
        assert_eq!(a.delta, vec![0.01, f64::INFINITY]);
        let FunctionalSpec::Psivar { gauge, deltas } = functional_spec(&a).unwrap() else { panic!() };
        assert_eq!((gauge, deltas.len()), (GaugeSpec::Taylor, 2));
        let c = parse(&["functional", "--kind", "lil", "--in", "a.csv", "--out", "r.json"]);
        let Command::Functional(a) = c.command else { panic!() };
        assert!(functional_spec(&a).unwrap_err().is_config_error());
    }

    #[test]
    fn simulate_writes_manifest_and_reports() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap();
        let args = ["simulate", "--kappa", "2", "--rho", "2", "--u0", "0-", "--T", "0.01", "--dt", "1e-4", "--samples", "3", "--seed", "5", "--out", out];
        run(parse(&args)).unwrap();
        let manifest = fs::read_to_string(dir.path().join("manifest.ndjson")).unwrap();
        assert_eq!(manifest.lines().count(), 3);
        let first: serde_json::Value = serde_json::from_str(manifest.lines().next().unwrap()).unwrap();
        assert_eq!(first["u0"][0], "0-");
        assert_eq!(first["kappa"], 2.0);
        let p = read_path(&dir.path().join("trace_00002.csv")).unwrap();
        assert_eq!(p.len(), 101);
        assert_eq!(fs::read_to_string(dir.path().join("report.ndjson")).unwrap().lines().count(), 3);
        assert!(fs::read_to_string(dir.path().join("summary.csv")).unwrap().starts_with("metric,n,median,q1,q3"));
    }

    #[test]
    fn error_codes() {
        let dir = tempfile::tempdir().unwrap();
        let missing = dir.path().join("nope.csv");
        let out = dir.path().join("r.json");
        let c = parse(&["functional", "--kind", "packing", "--in", missing.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(exit_code(&run(c).unwrap_err()), 2);
        let f = dir.path().join("bm.csv");
        crate::loewner::sample_bm(1, 1.0, 64, 1).unwrap().write_csv(fs::File::create(&f).unwrap()).unwrap();
        let c = parse(&[
            "functional", "--kind", "slowdown", "--gauge", "power:p=0.5", "--m", "1e-300", "--levels", "4",
            "--in", f.to_str().unwrap(), "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&run(c).unwrap_err()), 3);
    }
}
