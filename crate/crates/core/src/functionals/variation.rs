//! ψ-variation over partitions supported on the sample times.

use serde::{Deserialize, Serialize};

use crate::gauges::Gauge;
use crate::paths::{Point, SampledPath};

pub(crate) const LEAF: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariationResult {
    /// `sup Σ ψ(|η(t_{i+1}) − η(t_i)|)` over partitions with mesh `< mesh_delta`.
    pub value: f64,
    /// Times of a maximising partition.
    pub optimal_partition: Vec<f64>,
    /// Sample indices of the same partition.
    pub partition_indices: Vec<usize>,
    pub mesh_delta: f64,
}

impl VariationResult {
    /// `Σ ψ` over the stored partition, summed in the same order as the DP.
    pub fn recompute<G: Gauge + ?Sized>(&self, path: &SampledPath, psi: &G) -> f64 {
        let p = path.points();
        self.partition_indices.windows(2).fold(0.0, |acc, w| acc + psi.eval(p[w[0]].dist(p[w[1]])))
    }
}

/// Bounding discs of dyadic index blocks, `LEAF · 2^l` samples at level `l`.
pub(crate) struct BallTree {
    pub(crate) centers: Vec<Vec<Point>>,
    pub(crate) radii: Vec<Vec<f64>>,
}

impl BallTree {
    pub(crate) fn new(pts: &[Point]) -> Self {
        let mut centers = Vec::new();
        let mut radii = Vec::new();
        let mut boxes: Vec<(Point, Point)> = pts
            .chunks(LEAF)
            .map(|c| {
                c.iter().fold((c[0], c[0]), |(lo, hi), p| {
                    (Point::new(lo.x.min(p.x), lo.y.min(p.y)), Point::new(hi.x.max(p.x), hi.y.max(p.y)))
                })
            })
            .collect();
        let leaf_c: Vec<Point> = boxes.iter().map(|(lo, hi)| (*lo + *hi) * 0.5).collect();
        let leaf_r: Vec<f64> = pts
            .chunks(LEAF)
            .zip(&leaf_c)
            .map(|(c, ctr)| c.iter().map(|p| p.dist(*ctr)).fold(0.0, f64::max))
            .collect();
        centers.push(leaf_c);
        radii.push(leaf_r);
        while boxes.len() > 1 {
            let prev_c = centers.last().unwrap();
            let prev_r = radii.last().unwrap();
            let nb: Vec<(Point, Point)> = boxes
                .chunks(2)
                .map(|b| {
                    b.iter().skip(1).fold(b[0], |(lo, hi), (l2, h2)| {
                        (Point::new(lo.x.min(l2.x), lo.y.min(l2.y)), Point::new(hi.x.max(h2.x), hi.y.max(h2.y)))
                    })
                })
                .collect();
            let c: Vec<Point> = nb.iter().map(|(lo, hi)| (*lo + *hi) * 0.5).collect();
            let r: Vec<f64> = c
                .iter()
                .enumerate()
                .map(|(b, ctr)| {
                    (2 * b..(2 * b + 2).min(prev_c.len())).map(|k| ctr.dist(prev_c[k]) + prev_r[k]).fold(0.0, f64::max)
                })
                .collect();
            centers.push(c);
            radii.push(r);
            boxes = nb;
        }
        BallTree { centers, radii }
    }

    pub(crate) fn levels(&self) -> usize {
        self.centers.len()
    }
}

/// The DP engine shared by the sum, the seminorm and the bound checks.
///
/// `M[i] = max(0, max_{j : 0 < t_i − t_j < δ} M[j] + ψ(|x_i − x_j|))`. The
/// inner maximum walks a tree of index blocks from the most recent
/// backwards and skips a block when its best `M` plus `ψ` of the largest
/// possible distance cannot beat the current candidate. Ties go to the
/// earlier index, and a zero-valued chain loses to a fresh start.
pub(crate) fn variation_dp(times: &[f64], pts: &[Point], psi: impl Fn(f64) -> f64, delta: f64) -> (Vec<f64>, Vec<Option<usize>>) {
    let n = pts.len();
    let mut m = vec![0.0; n];
    let mut parent: Vec<Option<usize>> = vec![None; n];
    if n < 2 {
        return (m, parent);
    }
    let tree = BallTree::new(pts);
    let mut block_max: Vec<Vec<f64>> = tree.centers.iter().map(|c| vec![f64::NEG_INFINITY; c.len()]).collect();
    let top = tree.levels() - 1;

    struct Ctx<'a, F> {
        pts: &'a [Point],
        m: &'a [f64],
        tree: &'a BallTree,
        block_max: &'a [Vec<f64>],
        psi: &'a F,
        xi: Point,
        lo: usize,
        hi: usize,
        best: f64,
        best_j: Option<usize>,
    }

    fn visit<F: Fn(f64) -> f64>(c: &mut Ctx<'_, F>, level: usize, b: usize) {
        let size = LEAF << level;
        let (s, e) = (b * size, ((b + 1) * size).min(c.pts.len()));
        let (s, e) = (s.max(c.lo), e.min(c.hi));
        if s >= e {
            return;
        }
        let bound_m = c.block_max[level][b];
        if bound_m == f64::NEG_INFINITY {
            return;
        }
        let reach = c.xi.dist(c.tree.centers[level][b]) + c.tree.radii[level][b];
        let bound = bound_m + (c.psi)(reach * (1.0 + 1e-12));
        if bound < c.best {
            return;
        }
        if level == 0 {
            for j in (s..e).rev() {
                let v = c.m[j] + (c.psi)(c.xi.dist(c.pts[j]));
                if v > c.best || (v == c.best && c.best_j.is_some_and(|bj| j < bj)) {
                    c.best = v;
                    c.best_j = Some(j);
                }
            }
            return;
        }
        visit(c, level - 1, 2 * b + 1);
        visit(c, level - 1, 2 * b);
    }

    let mut lo = 0;
    for i in 0..n {
        while lo < i && !(times[i] - times[lo] < delta) {
            lo += 1;
        }
        if lo < i {
            let mut ctx = Ctx {
                pts,
                m: &m,
                tree: &tree,
                block_max: &block_max,
                psi: &psi,
                xi: pts[i],
                lo,
                hi: i,
                best: 0.0,
                best_j: None,
            };
            visit(&mut ctx, top, 0);
            let (best, best_j) = (ctx.best, ctx.best_j);
            m[i] = best;
            parent[i] = best_j;
        }
        for (l, bm) in block_max.iter_mut().enumerate() {
            let b = i / (LEAF << l);
            if m[i] > bm[b] {
                bm[b] = m[i];
            }
        }
    }
    (m, parent)
}

fn result_from(times: &[f64], m: &[f64], parent: &[Option<usize>], delta: f64) -> VariationResult {
    let mut end = 0;
    for (i, v) in m.iter().enumerate() {
        if *v > m[end] {
            end = i;
        }
    }
    let mut idx = vec![end];
    while let Some(j) = parent[*idx.last().unwrap()] {
        idx.push(j);
    }
    idx.reverse();
    VariationResult {
        value: m[end],
        optimal_partition: idx.iter().map(|&i| times[i]).collect(),
        partition_indices: idx,
        mesh_delta: delta,
    }
}

/// Exact maximum of `Σ ψ(|Δη|)` over partitions on sample times whose
/// consecutive gaps are `< delta`; `delta = ∞` removes the mesh constraint.
pub fn psi_variation_sum<G: Gauge + ?Sized>(path: &SampledPath, psi: &G, delta: f64) -> VariationResult {
    let (m, parent) = variation_dp(path.times(), path.points(), |x| psi.eval(x), delta);
    result_from(path.times(), &m, &parent, delta)
}

/// Samples of a real-valued path where the direction of motion changes,
/// plus both endpoints; repeated values are dropped.
fn turning_points(path: &SampledPath) -> Option<(Vec<f64>, Vec<Point>)> {
    let (t, p) = (path.times(), path.points());
    if p.iter().any(|q| q.y != 0.0) {
        return None;
    }
    let mut kt = vec![t[0]];
    let mut kp = vec![p[0]];
    let mut dir = 0.0f64;
    for i in 1..p.len() {
        let step = p[i].x - kp.last().unwrap().x;
        if step == 0.0 {
            continue;
        }
        if step.signum() == dir && kp.len() > 1 {
            // still moving the same way: slide the last kept sample along
            *kt.last_mut().unwrap() = t[i];
            *kp.last_mut().unwrap() = p[i];
        } else {
            kt.push(t[i]);
            kp.push(p[i]);
            dir = step.signum();
        }
    }
    Some((kt, kp))
}

/// `sup Σ ψ(|Δη| / scale)`; the feasibility test behind the seminorm.
///
/// With `delta = ∞` on a real-valued path only turning points can matter
/// when `ψ(x)/x` is nondecreasing (true for convex ψ with `ψ(0) = 0`), since
/// merging two increments of the same sign never lowers the sum; the DP
/// then runs on those alone.
pub fn psi_variation_scaled<G: Gauge + ?Sized>(path: &SampledPath, psi: &G, delta: f64, scale: f64) -> f64 {
    let f = |x: f64| psi.eval(x / scale);
    let (m, _) = match turning_points(path).filter(|_| delta == f64::INFINITY) {
        Some((t, p)) => variation_dp(&t, &p, f, delta),
        None => variation_dp(path.times(), path.points(), f, delta),
    };
    m.iter().cloned().fold(0.0, f64::max)
}

/// Whether `[η]_{ψ-var} ≤ bound`, i.e. `sup Σ ψ(|Δη| / bound) ≤ 1`, along with
/// that supremum.
pub fn seminorm_at_most<G: Gauge + ?Sized>(path: &SampledPath, psi: &G, delta: f64, bound: f64) -> (bool, f64) {
    let v = psi_variation_scaled(path, psi, delta, bound);
    (v <= 1.0, v)
}

/// `inf { M : sup Σ ψ(|Δη| / M) ≤ 1 }` by geometric bisection to relative
/// tolerance `1e-6`; returns the feasible end of the bracket.
pub fn psi_variation_seminorm<G: Gauge + ?Sized>(path: &SampledPath, psi: &G, delta: f64) -> f64 {
    let p = path.points();
    let max_step = p.iter().map(|q| q.dist(p[0])).fold(0.0, f64::max);
    if max_step == 0.0 {
        return 0.0;
    }
    let feasible = |m: f64| psi_variation_scaled(path, psi, delta, m) <= 1.0;
    let mut hi = max_step;
    while !feasible(hi) {
        hi *= 2.0;
    }
    let mut lo = hi / 2.0;
    while feasible(lo) {
        hi = lo;
        lo /= 2.0;
        if lo < f64::MIN_POSITIVE {
            return hi;
        }
    }
    while hi / lo - 1.0 > 1e-6 {
        let mid = (lo * hi).sqrt();
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Reference maximum by enumerating every subsequence of samples; only for
/// paths of at most 20 samples.
pub fn psi_variation_exhaustive<G: Gauge + ?Sized>(path: &SampledPath, psi: &G, delta: f64) -> f64 {
    let (t, p) = (path.times(), path.points());
    let n = t.len();
    assert!(n <= 20, "exhaustive enumeration is exponential");
    let mut best = 0.0;
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if idx.windows(2).any(|w| !(t[w[1]] - t[w[0]] < delta)) {
            continue;
        }
        let s = idx.windows(2).fold(0.0, |acc, w| acc + psi.eval(p[w[0]].dist(p[w[1]])));
        if s > best {
            best = s;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauges::PathGauge;
    use proptest::prelude::*;

    fn real_path(v: &[f64]) -> SampledPath {
        SampledPath::from_real((0..v.len()).map(|i| i as f64).collect(), v, "t").unwrap()
    }

    #[test]
    fn two_points_and_mesh() {
        let p = real_path(&[0.0, 3.0]);
        let sq = |x: f64| x * x;
        assert_eq!(psi_variation_sum(&p, &sq, 2.0).value, 9.0);
        assert_eq!(psi_variation_sum(&p, &sq, 1.0).value, 0.0);
        assert_eq!(psi_variation_sum(&real_path(&[5.0]), &sq, 1.0).value, 0.0);
    }

    #[test]
    fn up_and_down() {
        let p = real_path(&[0.0, 1.0, 0.0]);
        let id = |x: f64| x;
        let r = psi_variation_sum(&p, &id, f64::INFINITY);
        assert_eq!(r.value, 2.0);
        assert_eq!(r.partition_indices, vec![0, 1, 2]);
        assert_eq!(r.recompute(&p, &id), r.value);
    }

    #[test]
    fn ties_prefer_earlier_index() {
        // 0 -> 2 and 1 -> 2 give the same value; the chain must start at 0
        let p = real_path(&[0.0, 0.0, 1.0]);
        let r = psi_variation_sum(&p, &|x: f64| x * x, f64::INFINITY);
        assert_eq!(r.partition_indices, vec![0, 2]);
    }

    #[test]
    fn large_path_matches_unpruned_dp() {
        let n = 700;
        let mut x = 0.0;
        let v: Vec<f64> = (0..n)
            .map(|i| {
                x += ((i * 7919 % 113) as f64 / 56.0 - 1.0) * 0.1;
                x
            })
            .collect();
        let p = real_path(&v);
        let psi = PathGauge::Taylor;
        for delta in [5.0, 40.0, f64::INFINITY] {
            let fast = psi_variation_sum(&p, &psi, delta).value;
            let mut m = vec![0.0f64; n];
            for i in 0..n {
                for j in 0..i {
                    if (i - j) as f64 >= delta {
                        continue;
                    }
                    m[i] = m[i].max(m[j] + psi.eval((v[i] - v[j]).abs()));
                }
            }
            let slow = m.iter().cloned().fold(0.0, f64::max);
            assert!((fast - slow).abs() <= 1e-12 * slow, "delta {delta}: {fast} vs {slow}");
        }
    }

    #[test]
    fn seminorm_examples() {
        let sq = |x: f64| x * x;
        assert_eq!(psi_variation_seminorm(&real_path(&[1.0, 1.0, 1.0]), &sq, f64::INFINITY), 0.0);
        let a = 0.37;
        let s = psi_variation_seminorm(&real_path(&[0.0, a]), &sq, f64::INFINITY);
        assert!((s - a).abs() <= 1e-6 * a);
        let p = real_path(&[0.0, 0.4, -0.3, 0.9, 0.1]);
        let q = p.map_points(|x| x * 2.5).unwrap();
        let cube = |x: f64| x.powi(3);
        let (s1, s2) = (psi_variation_seminorm(&p, &cube, f64::INFINITY), psi_variation_seminorm(&q, &cube, f64::INFINITY));
        assert!((s2 / s1 - 2.5).abs() < 1e-5);
        // bracketing witness
        assert!(psi_variation_scaled(&p, &cube, f64::INFINITY, s1) <= 1.0 + 1e-6);
        assert!(psi_variation_scaled(&p, &cube, f64::INFINITY, s1 / (1.0 + 1e-3)) > 1.0);
    }

    #[test]
    fn turning_point_reduction_is_exact() {
        let mut x = 0.0;
        let v: Vec<f64> = (0..3000)
            .map(|i| {
                if i % 5 != 0 {
                    x += ((i * 7919 % 101) as f64 / 50.0 - 1.0) * 0.01;
                }
                x
            })
            .collect();
        let p = real_path(&v);
        for psi in [PathGauge::Power(2.0), PathGauge::Power(1.3), PathGauge::Taylor] {
            let full = psi_variation_sum(&p, &psi, f64::INFINITY).value;
            let reduced = psi_variation_scaled(&p, &psi, f64::INFINITY, 1.0);
            assert!((full - reduced).abs() <= 1e-12 * full, "{full} vs {reduced}");
        }
        let (kt, _) = turning_points(&p).unwrap();
        assert!(kt.len() < p.len());
    }

    proptest! {
        #[test]
        fn dp_equals_enumeration(v in prop::collection::vec(-3.0f64..3.0, 1..=10), delta in 0.5f64..12.0, p in 1.0f64..3.0) {
            let path = real_path(&v);
            let psi = move |x: f64| x.powf(p);
            let dp = psi_variation_sum(&path, &psi, delta);
            let brute = psi_variation_exhaustive(&path, &psi, delta);
            prop_assert!((dp.value - brute).abs() <= 1e-12 * brute.max(1.0));
            prop_assert_eq!(dp.recompute(&path, &psi), dp.value);
            prop_assert!(dp.optimal_partition.windows(2).all(|w| w[1] > w[0] && w[1] - w[0] < delta));
        }

        #[test]
        fn mesh_monotone(v in prop::collection::vec(-3.0f64..3.0, 2..40), d1 in 0.5f64..20.0, d2 in 0.5f64..20.0) {
            let path = real_path(&v);
            let psi = |x: f64| x * x;
            let (a, b) = (d1.min(d2), d1.max(d2));
            prop_assert!(psi_variation_sum(&path, &psi, a).value <= psi_variation_sum(&path, &psi, b).value);
        }
    }
}
