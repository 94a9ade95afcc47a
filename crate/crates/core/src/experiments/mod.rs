//! Monte Carlo experiments built from the simulation, content and
//! functional layers.

mod crossing;
mod markov;
mod pipeline;
mod scaling;
mod sle;
pub mod stats;
mod tail;

pub use crossing::{crossing_time_experiment, CrossingReport};
pub use markov::{markov_lil_experiment, BrownianSampler, MarkovLilConfig, MarkovLilReport, ProcessSampler};
pub use pipeline::{
    evaluate_functional, regularity_pipeline, ExperimentReport, FunctionalSpec, NaturalSpec, PathRecord, PipelineConfig,
    ProcessSpec, SummaryRow,
};
pub use scaling::{scaling_check, ScalingReport, MIN_SCALING_PATHS};
pub use sle::{content_scaling_experiment, trace_content, ContentScalingConfig, ContentScalingReport, TraceContent};
pub use tail::{linear_grid, tail_fit, tail_fit_with, TailFit, TailFitConfig, MIN_TAIL_SAMPLES};

use thiserror::Error;

use crate::content::ContentError;
use crate::functionals::FunctionalError;
use crate::gauges::GaugeError;
use crate::loewner::LoewnerError;
use crate::paths::PathError;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("only {usable} grid points fall in the survival window; need 4")]
    InsufficientTailData { usable: usize },
    #[error("no path reached radius {radius} ({hits} hits)")]
    InsufficientHits { hits: usize, radius: f64 },
    #[error("{have} usable samples; need {need}")]
    InsufficientSamples { have: usize, need: usize },
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
    #[error(transparent)]
    Loewner(#[from] LoewnerError),
    #[error(transparent)]
    Content(#[from] ContentError),
    #[error(transparent)]
    Functional(#[from] FunctionalError),
    #[error(transparent)]
    Gauge(#[from] GaugeError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error("sample {index} (seed {seed}): {source}")]
    AtSample { index: usize, seed: u64, source: Box<ExperimentError> },
}

impl ExperimentError {
    /// Whether the failure comes from the inputs rather than the numerics.
    pub fn is_config_error(&self) -> bool {
        match self {
            ExperimentError::Config(_) => true,
            ExperimentError::Gauge(GaugeError::InvalidParameter(_) | GaugeError::OutOfDomain { .. }) => true,
            ExperimentError::Loewner(LoewnerError::InvalidParameter(_)) => true,
            ExperimentError::Functional(FunctionalError::InvalidParameter(_) | FunctionalError::InvalidProbability(_)) => true,
            ExperimentError::Content(ContentError::ResolutionError { .. } | ContentError::TooFewLevels) => true,
            ExperimentError::AtSample { source, .. } => source.is_config_error(),
            _ => false,
        }
    }
}
