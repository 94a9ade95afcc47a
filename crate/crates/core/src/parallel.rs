//! Ensemble fan-out and per-sample random streams.
//!
//! Every ensemble member draws from its own generator keyed by
//! `(master_seed, sample_index)`, and results are collected in index order,
//! so outputs do not depend on how many threads ran them.

use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "LAB_THREADS";

/// Seed of sample `index` in an ensemble with `master_seed`.
///
/// A SplitMix64 finaliser over the pair; distinct indices give
/// well-separated seeds.
pub fn sample_seed(master_seed: u64, index: u64) -> u64 {
    let mut z = master_seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The generator every sampler in the crate uses for a given seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Worker count requested through `LAB_THREADS`, if set to a positive integer.
pub fn configured_threads() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

fn lab_pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = configured_threads() {
            b = b.num_threads(n);
        }
        b.build().expect("thread pool")
    })
}

/// `f(0), f(1), …, f(n−1)` evaluated in parallel and returned in order.
///
/// Runs on the enclosing rayon pool when called from one (see
/// [`with_threads`]), otherwise on a pool sized by `LAB_THREADS`.
pub fn ensemble_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    let run = || (0..n).into_par_iter().map(&f).collect();
    if rayon::current_thread_index().is_some() {
        run()
    } else {
        lab_pool().install(run)
    }
}

/// Runs `op` on a fresh pool of `threads` workers.
pub fn with_threads<R: Send>(threads: usize, op: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool")
        .install(op)
}
