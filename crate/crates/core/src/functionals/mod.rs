//! Regularity functionals evaluated on sampled paths.
//!
//! Suprema over partitions and pairs are restricted to sample times.

mod counting;
mod local;
mod slowdown;
mod variation;
mod vitali;

pub use counting::{ball_packing_count, conditional_bc_bound, BcBound};
pub use local::{lil_statistic, lil_statistic_large, moc_ratio, moc_ratio_exhaustive, LilResult, ShellMax};
pub use slowdown::{slowdown_reparam, SlowdownResult};
pub use variation::{
    psi_variation_exhaustive, psi_variation_scaled, psi_variation_seminorm, psi_variation_sum, seminorm_at_most,
    VariationResult,
};
pub use vitali::{vitali_extract, VitaliResult};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FunctionalError {
    /// `s(t) = 0` on the dyadic interval `I_{k,j}`: `M` is too small.
    #[error("infinite time change on dyadic interval k={k}, j={j}")]
    InfiniteTimeChange { k: u32, j: u64 },
    #[error("invalid probability: {0}")]
    InvalidProbability(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
