//! Dyadic slowdown time change giving a path the modulus `(2^α + 1) M σ`.

use serde::{Deserialize, Serialize};

use super::variation::{BallTree, LEAF};
use super::FunctionalError;
use crate::gauges::Gauge;
use crate::paths::{point_set_diameter, Point, SampledPath};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlowdownResult {
    /// `s(t)` on the `2^{k_max}` finest dyadic cells of `[0, 1]`.
    pub s_of_t: Vec<f64>,
    /// `T` at the cell edges `j 2^{−k_max}`, `j = 0..=2^{k_max}`.
    pub t_of_t: Vec<f64>,
    /// `M (2^α + 1) T(1)^α`.
    pub variation_bound: f64,
    pub m: f64,
    pub alpha: f64,
    pub k_max: u32,
    /// `min 1 − |X_{t1} − X_{t2}| / ((2^α+1) M σ(|T(t1) − T(t2)|))` over
    /// sampled pairs; nonnegative iff the modulus inequality holds.
    pub worst_margin: f64,
}

impl SlowdownResult {
    /// `T(t)`, linear inside each finest cell.
    pub fn time_change(&self, t: f64) -> f64 {
        let cells = self.s_of_t.len();
        let x = t.clamp(0.0, 1.0) * cells as f64;
        let c = (x.floor() as usize).min(cells - 1);
        self.t_of_t[c] + (x - c as f64) / cells as f64 / self.s_of_t[c]
    }

    /// `T(1)`.
    pub fn total_time(&self) -> f64 {
        *self.t_of_t.last().unwrap()
    }

    /// The same samples placed at times `T(t_i)`.
    pub fn reparametrized(&self, path: &SampledPath) -> SampledPath {
        let times: Vec<f64> = path.times().iter().map(|&t| self.time_change(t)).collect();
        SampledPath::new(times, path.points().to_vec(), path.label().to_string()).expect("T is strictly increasing")
    }
}

/// Builds `s_{k,j} = min(1, 2^{−k} / σ⁻¹(osc(X; I_{k,j}) / M))` for `k ≤ k_max`,
/// `s(t) = min_k s_{k,j(t)}`, `T(t) = ∫₀ᵗ 1/s`, and checks the modulus
/// inequality on every sampled pair.
///
/// `sigma.eval` is σ and `sigma.inverse` is σ⁻¹. The path must live on
/// `[0, 1]`; pairs closer than `2^{−k_max−1}` are only covered by the lemma
/// when `k_max` reaches the sampling scale.
pub fn slowdown_reparam<G: Gauge + ?Sized>(
    path: &SampledPath,
    sigma: &G,
    m: f64,
    alpha: f64,
    k_max: u32,
) -> Result<SlowdownResult, FunctionalError> {
    if !(m > 0.0) || !(alpha > 0.0 && alpha <= 1.0) || k_max > 30 {
        return Err(FunctionalError::InvalidParameter(format!("need M > 0, α ∈ (0,1], k_max ≤ 30; got {m}, {alpha}, {k_max}")));
    }
    let (t, p) = (path.times(), path.points());
    if t[0] < 0.0 || *t.last().unwrap() > 1.0 {
        return Err(FunctionalError::InvalidParameter("slowdown needs a path on [0, 1]".into()));
    }
    let cells = 1usize << k_max;
    let mut s_cell = vec![1.0f64; cells];
    for k in 0..=k_max {
        let width = 2f64.powi(-(k as i32));
        let span = 1usize << (k_max - k);
        for j in 0..(1usize << k) {
            let (lo, hi) = (j as f64 * width, (j + 1) as f64 * width);
            let a = t.partition_point(|&s| s < lo);
            let b = t.partition_point(|&s| s <= hi);
            if b <= a + 1 {
                continue;
            }
            let osc = point_set_diameter(&p[a..b]);
            if osc == 0.0 {
                continue;
            }
            let y = osc / m;
            let u = sigma.inverse(y);
            let mut s = (width / u).min(1.0);
            // rounding in width / s must not undercut σ⁻¹(y)
            while s > 0.0 && s < 1.0 && sigma.eval(width / s) < y {
                s *= 1.0 - 4.0 * f64::EPSILON;
            }
            if !(s > 0.0) || !s.is_finite() {
                return Err(FunctionalError::InfiniteTimeChange { k, j: j as u64 });
            }
            for c in &mut s_cell[j * span..(j + 1) * span] {
                *c = c.min(s);
            }
        }
    }
    let h = 1.0 / cells as f64;
    let mut t_edge = Vec::with_capacity(cells + 1);
    t_edge.push(0.0);
    let mut acc = 0.0;
    for s in &s_cell {
        acc += h / s;
        t_edge.push(acc);
    }
    let mut res = SlowdownResult {
        s_of_t: s_cell,
        t_of_t: t_edge,
        variation_bound: 0.0,
        m,
        alpha,
        k_max,
        worst_margin: f64::INFINITY,
    };
    res.variation_bound = m * (2f64.powf(alpha) + 1.0) * res.total_time().powf(alpha);
    let tt: Vec<f64> = t.iter().map(|&s| res.time_change(s)).collect();
    res.worst_margin = worst_margin(&tt, p, |dt| (2f64.powf(alpha) + 1.0) * m * sigma.eval(dt));
    Ok(res)
}

/// Exact minimum of `1 − |x_j − x_i| / bound(T_j − T_i)` over `i < j` by
/// branch and bound on pairs of index blocks.
fn worst_margin(tt: &[f64], p: &[Point], bound: impl Fn(f64) -> f64) -> f64 {
    let n = p.len();
    if n < 2 {
        return 1.0;
    }
    let margin = |i: usize, j: usize| {
        let d = p[i].dist(p[j]);
        if d == 0.0 {
            1.0
        } else {
            1.0 - d / bound(tt[j] - tt[i])
        }
    };
    let mut best = (1..n).map(|i| margin(i - 1, i)).fold(f64::INFINITY, f64::min);
    let tree = BallTree::new(p);

    fn block(level: usize, b: usize, n: usize) -> (usize, usize) {
        let size = LEAF << level;
        (b * size, ((b + 1) * size).min(n))
    }

    struct Ctx<'a, F, B> {
        tt: &'a [f64],
        tree: &'a BallTree,
        margin: &'a F,
        bound: &'a B,
        n: usize,
        best: f64,
    }

    fn pair<F: Fn(usize, usize) -> f64, B: Fn(f64) -> f64>(c: &mut Ctx<'_, F, B>, level: usize, a: usize, b: usize) {
        let nb = c.tree.centers[level].len();
        if a >= nb || b >= nb {
            return;
        }
        let (sa, ea) = block(level, a, c.n);
        let (sb, eb) = block(level, b, c.n);
        if a == b {
            if level == 0 {
                for i in sa..ea {
                    for j in i + 1..ea {
                        c.best = c.best.min((c.margin)(i, j));
                    }
                }
            } else {
                pair(c, level - 1, 2 * a, 2 * a);
                pair(c, level - 1, 2 * a + 1, 2 * a + 1);
                pair(c, level - 1, 2 * a, 2 * a + 1);
            }
            return;
        }
        let gap = c.tt[sb] - c.tt[ea - 1];
        let reach = c.tree.centers[level][a].dist(c.tree.centers[level][b]) + c.tree.radii[level][a] + c.tree.radii[level][b];
        if gap > 0.0 {
            let lower = 1.0 - reach * (1.0 + 1e-12) / (c.bound)(gap);
            if lower >= c.best {
                return;
            }
        }
        if level == 0 {
            for i in sa..ea {
                for j in sb..eb {
                    c.best = c.best.min((c.margin)(i, j));
                }
            }
            return;
        }
        for (x, y) in [(2 * a + 1, 2 * b), (2 * a, 2 * b), (2 * a + 1, 2 * b + 1), (2 * a, 2 * b + 1)] {
            pair(c, level - 1, x, y);
        }
    }

    let top = tree.levels() - 1;
    let mut ctx = Ctx { tt, tree: &tree, margin: &margin, bound: &bound, n, best };
    pair(&mut ctx, top, 0, 0);
    best = ctx.best;
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauges::{GaugeSet, PathGauge, SigmaGauge};
    use crate::loewner::sample_bm;

    fn exp_sigma() -> PathGauge {
        PathGauge::Sigma(SigmaGauge::new(GaugeSet::exp(1.0, 2.0, 0.5).unwrap()).unwrap())
    }

    #[test]
    fn constant_path() {
        let t: Vec<f64> = (0..=64).map(|i| i as f64 / 64.0).collect();
        let p = SampledPath::from_real(t, &[2.0; 65], "c").unwrap();
        let r = slowdown_reparam(&p, &exp_sigma(), 1.5, 0.5, 6).unwrap();
        assert!(r.s_of_t.iter().all(|&s| s == 1.0));
        assert!((r.time_change(0.3) - 0.3).abs() < 1e-15);
        assert!((r.variation_bound - 1.5 * (2f64.sqrt() + 1.0)).abs() < 1e-12);
        assert_eq!(r.worst_margin, 1.0);
    }

    #[test]
    fn slow_path_needs_no_slowdown() {
        // osc on I_{k,j} is 2^{-k} · 0.1 ≤ σ(2^{-k}) for σ(t) = √t and M = 1
        let n = 256;
        let t: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let v: Vec<f64> = t.iter().map(|s| 0.1 * s).collect();
        let p = SampledPath::from_real(t, &v, "slow").unwrap();
        let r = slowdown_reparam(&p, &PathGauge::Power(0.5), 1.0, 0.5, 8).unwrap();
        assert!(r.s_of_t.iter().all(|&s| s == 1.0));
        assert!(r.worst_margin > 0.0);
    }

    #[test]
    fn branch_and_bound_matches_all_pairs() {
        let bm = sample_bm(1, 1.0, 1500, 3).unwrap();
        let sigma = exp_sigma();
        let r = slowdown_reparam(&bm, &sigma, 0.3, 0.5, 10).unwrap();
        let tt: Vec<f64> = bm.times().iter().map(|&s| r.time_change(s)).collect();
        let p = bm.points();
        let c = (2f64.sqrt() + 1.0) * 0.3;
        let mut brute = f64::INFINITY;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                let d = p[i].dist(p[j]);
                let m = if d == 0.0 { 1.0 } else { 1.0 - d / (c * sigma.eval(tt[j] - tt[i])) };
                brute = brute.min(m);
            }
        }
        assert_eq!(r.worst_margin, brute);
        assert!(r.worst_margin >= 0.0);
        assert!(r.s_of_t.iter().all(|&s| s > 0.0 && s <= 1.0));
        assert!(r.t_of_t.windows(2).all(|w| w[1] >= w[0]) && r.t_of_t[0] == 0.0);
        let rp = r.reparametrized(&bm);
        assert!((rp.end_time() - r.total_time()).abs() < 1e-12);
    }

    #[test]
    fn infinite_time_change() {
        let bm = sample_bm(1, 1.0, 64, 1).unwrap();
        let err = slowdown_reparam(&bm, &PathGauge::Power(0.5), 1e-300, 0.5, 6);
        assert!(matches!(err, Err(FunctionalError::InfiniteTimeChange { .. })), "{err:?}");
    }
}
