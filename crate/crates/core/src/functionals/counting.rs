//! Greedy disc packing and the conditional Borel–Cantelli inequality.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::FunctionalError;
use crate::paths::Point;

/// Number of centres a greedy scan accepts when every accepted centre must
/// lie at distance `≥ 2 · radius` from all previous ones.
pub fn ball_packing_count(points: &[Point], radius: f64) -> usize {
    let cell = 2.0 * radius;
    let key = |p: Point| ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<Point>> = HashMap::new();
    let mut count = 0;
    for &p in points {
        let (cx, cy) = key(p);
        let clash = (cx - 1..=cx + 1)
            .flat_map(|x| (cy - 1..=cy + 1).map(move |y| (x, y)))
            .filter_map(|k| grid.get(&k))
            .flatten()
            .any(|q| q.dist(p) < cell);
        if !clash {
            grid.entry((cx, cy)).or_default().push(p);
            count += 1;
        }
    }
    count
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BcBound {
    /// Whether `exp(−(1 − (1−p)/q) Σ p_j) < q`.
    pub holds: bool,
    /// The left-hand side.
    pub lhs: f64,
    /// Lower bound `1 − q` on the probability of the union, valid when `holds`.
    pub bound: f64,
}

pub fn conditional_bc_bound(p: f64, q: f64, p_list: &[f64]) -> Result<BcBound, FunctionalError> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(FunctionalError::InvalidProbability(format!("p = {p} not in (0,1]")));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(FunctionalError::InvalidProbability(format!("q = {q} not in (0,1)")));
    }
    if let Some(bad) = p_list.iter().find(|v| !(**v >= 0.0 && **v <= 1.0)) {
        return Err(FunctionalError::InvalidProbability(format!("p_j = {bad} not in [0,1]")));
    }
    let sum: f64 = p_list.iter().sum();
    let lhs = (-(1.0 - (1.0 - p) / q) * sum).exp();
    Ok(BcBound { holds: lhs < q, lhs, bound: 1.0 - q })
}
