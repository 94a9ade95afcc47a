//! Gauge families (Φ, φ, h, α, R, n0), the τ integral, σ and ψ = σ⁻¹,
//! and a numerical check of the structural conditions on Φ and φ.

use serde::{Deserialize, Serialize};

use super::numeric::{integrate, invert_increasing};
use super::young::{Growth, YoungFn};
use super::{ln_star, GaugeError};
use crate::paths::SampledPath;

/// Which Φ family a configuration names.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyKind {
    /// `Φ(x) = (e^{c x^β} − 1)/(e^c − 1)` with `φ = Φ`.
    Exp { c: f64, beta: f64 },
    /// `Φ(x) = x^p` with `φ(x) = x^p / h(log* x)`.
    Poly { p: f64 },
}

/// A gauge family as written in configuration files, e.g.
/// `{family = "exp", c = 1.0, beta = 2.0}`. Omitted fields take the
/// family defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeFamilySpec {
    #[serde(flatten)]
    pub kind: FamilyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n0: Option<u32>,
    /// Exponent `q` of `h(u) = u^q`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
}

impl GaugeFamilySpec {
    pub fn exp(c: f64, beta: f64) -> Self {
        Self::of(FamilyKind::Exp { c, beta })
    }

    pub fn poly(p: f64) -> Self {
        Self::of(FamilyKind::Poly { p })
    }

    fn of(kind: FamilyKind) -> Self {
        GaugeFamilySpec { kind, alpha: None, r: None, n0: None, h_q: None, k: None }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn build(&self) -> Result<GaugeSet, GaugeError> {
        let alpha = self.alpha.unwrap_or(0.5);
        let q = match self.kind {
            FamilyKind::Exp { .. } => 1.5,
            FamilyKind::Poly { .. } => 2.0,
        };
        let h = Growth::Power { q: self.h_q.unwrap_or(q) };
        let mut set = match self.kind {
            FamilyKind::Exp { c, beta } => GaugeSet::exp(c, beta, alpha)?,
            FamilyKind::Poly { p } => GaugeSet::poly(p, alpha, h)?,
        };
        set.h = h;
        if let Some(r) = self.r {
            set.r = r;
        }
        if let Some(n0) = self.n0 {
            set.n0 = n0;
        }
        if let Some(k) = self.k {
            set.chaining_constant_k = k;
        }
        set.validate()?;
        Ok(set)
    }
}

/// Φ, φ, h and the chaining parameters of one gauge family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeSet {
    pub phi_big: YoungFn,
    pub phi_small: YoungFn,
    pub h: Growth,
    pub alpha: f64,
    pub r: f64,
    pub n0: u32,
    /// Chaining constant; 1 until calibrated with
    /// [`GaugeSet::calibrate_chaining_constant`].
    pub chaining_constant_k: f64,
}

impl GaugeSet {
    /// Exponential family with `φ = Φ`, `h(u) = u^{3/2}`, `R = 2`, `n0 = 1`.
    ///
    /// With `c = 1, β = 2, α = 1/2` the slope of `ln σ` just left of the
    /// kink at `t = e^{-1}` is `α − 0.316 q`, so `h(u) = u²` would make σ
    /// dip there; `q = 3/2` keeps it increasing.
    pub fn exp(c: f64, beta: f64, alpha: f64) -> Result<Self, GaugeError> {
        let phi = YoungFn::Exp { c, beta };
        Self::custom(phi, phi, Growth::Power { q: 1.5 }, alpha, 2.0, 1)
    }

    /// Polynomial family `Φ = x^p`, `φ = x^p / h(log* x)`, `R = e³`, `n0 = 1`.
    pub fn poly(p: f64, alpha: f64, h: Growth) -> Result<Self, GaugeError> {
        if p * alpha <= 1.0 {
            return Err(GaugeError::InvalidParameter(format!(
                "poly family needs p > 1/alpha (p = {p}, alpha = {alpha})"
            )));
        }
        Self::custom(YoungFn::Power { p }, YoungFn::PowerOverGrowth { p, h }, h, alpha, 3f64.exp(), 1)
    }

    pub fn custom(
        phi_big: YoungFn,
        phi_small: YoungFn,
        h: Growth,
        alpha: f64,
        r: f64,
        n0: u32,
    ) -> Result<Self, GaugeError> {
        let set = GaugeSet { phi_big, phi_small, h, alpha, r, n0, chaining_constant_k: 1.0 };
        set.validate()?;
        Ok(set)
    }

    pub fn validate(&self) -> Result<(), GaugeError> {
        self.phi_big.validate()?;
        self.phi_small.validate()?;
        self.h.validate()?;
        let bad = |m: String| Err(GaugeError::InvalidParameter(m));
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return bad(format!("alpha = {} outside (0, 1]", self.alpha));
        }
        if !(self.r > 1.0 && self.r.is_finite()) {
            return bad(format!("R = {} must exceed 1", self.r));
        }
        if self.n0 == 0 {
            return bad("n0 must be at least 1".into());
        }
        if !(self.chaining_constant_k > 0.0 && self.chaining_constant_k.is_finite()) {
            return bad(format!("K = {} must be positive", self.chaining_constant_k));
        }
        Ok(())
    }

    /// `τ(t) = ∫₀^{t^α} φ⁻¹(1 / (2 u^{1/α})) du`.
    ///
    /// With `u = t^α e^{-s}` the integral becomes
    /// `t^α ∫₀^∞ φ⁻¹(e^{s/α} / (2t)) e^{-s} ds`, which is smooth; it is
    /// summed over doubling chunks of `s` until the tail is negligible.
    pub fn tau_integral(&self, t: f64) -> Result<f64, GaugeError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(GaugeError::OutOfDomain { what: "t", value: t, domain: "[0, 1]" });
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        let a = self.alpha;
        let ln_2t = (2.0 * t).ln();
        let phi = self.phi_small;
        let f = move |s: f64| (phi.inverse_ln(s / a - ln_2t).ln() - s).exp();
        let mut total = 0.0;
        let mut prev_chunk = f64::INFINITY;
        let (mut lo, mut width) = (0.0, 1.0);
        for chunk in 0..80 {
            let hi = lo + width;
            let (v, _) = integrate(f, lo, hi, 1e-11, 0.0);
            if !v.is_finite() {
                return Err(GaugeError::DivergentIntegral);
            }
            total += v;
            if v <= 1e-13 * total {
                return Ok(t.powf(a) * total);
            }
            // a convergent tail shrinks geometrically once the chunks are long
            if chunk >= 6 && v >= 0.999 * prev_chunk {
                return Err(GaugeError::DivergentIntegral);
            }
            prev_chunk = v;
            lo = hi;
            width *= 2.0;
        }
        Err(GaugeError::DivergentIntegral)
    }

    /// `ln σ(t)` for `σ(t) = t^α Φ⁻¹(h(log*(1/t)))`, any `t > 0`.
    pub fn ln_sigma(&self, t: f64) -> f64 {
        let ln_h = self.h.ln_eval(ln_star(1.0 / t));
        self.alpha * t.ln() + self.phi_big.inverse_ln(ln_h).ln()
    }

    pub fn sigma(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        self.ln_sigma(t).exp()
    }

    /// Smallest-`K` scan: the least chaining constant for which the sample
    /// mean of `sup_{s,t} Φ(|X_s − X_t| / (2Kτ(|t−s|)))` is at most 1.
    ///
    /// Pairs are taken over the samples of each path, whose time span is
    /// rescaled to `[0, 1]`. Quadratic in path length.
    pub fn calibrate_chaining_constant(&self, paths: &[SampledPath]) -> Result<f64, GaugeError> {
        if paths.is_empty() {
            return Err(GaugeError::InvalidParameter("calibration needs at least one path".into()));
        }
        // worst normalised increment per path; τ is cached per lag
        let mut cache = std::collections::HashMap::new();
        let mut worst = Vec::with_capacity(paths.len());
        for p in paths {
            let (t0, span) = (p.start_time(), p.span().len().max(f64::MIN_POSITIVE));
            let ts: Vec<f64> = p.times().iter().map(|t| (t - t0) / span).collect();
            let mut w: f64 = 0.0;
            for i in 0..ts.len() {
                for j in i + 1..ts.len() {
                    let lag = (ts[j] - ts[i]).min(1.0);
                    let tau = match cache.get(&lag.to_bits()) {
                        Some(&v) => v,
                        None => {
                            let v = self.tau_integral(lag)?;
                            cache.insert(lag.to_bits(), v);
                            v
                        }
                    };
                    if tau > 0.0 {
                        w = w.max(p.points()[i].dist(p.points()[j]) / (2.0 * tau));
                    }
                }
            }
            worst.push(w);
        }
        let mean_at = |k: f64| worst.iter().map(|&w| self.phi_big.eval(w / k)).sum::<f64>() / worst.len() as f64;
        let mut hi = 1.0;
        while mean_at(hi) > 1.0 {
            hi *= 2.0;
            if hi > 1e12 {
                return Err(GaugeError::DivergentIntegral);
            }
        }
        let mut lo = hi / 2.0;
        if mean_at(lo) <= 1.0 {
            while lo > 1e-12 && mean_at(lo) <= 1.0 {
                hi = lo;
                lo /= 2.0;
            }
        }
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if mean_at(mid) <= 1.0 {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-9 * hi {
                break;
            }
        }
        Ok(hi)
    }
}

/// σ of a gauge family together with its inverse ψ = σ⁻¹.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SigmaGauge {
    pub set: GaugeSet,
}

impl SigmaGauge {
    /// Wraps `set` after checking that σ increases on a dense log grid over
    /// `[1e-12, 1e3]` refined around the `log*` kink at `t = e^{-1}`.
    pub fn new(set: GaugeSet) -> Result<Self, GaugeError> {
        set.validate()?;
        let mut grid: Vec<f64> = (0..=3000).map(|i| 10f64.powf(-12.0 + 15.0 * i as f64 / 3000.0)).collect();
        let kink = (-1f64).exp();
        grid.extend((0..200).map(|i| kink * (1.0 + (i as f64 - 100.0) * 1e-5)));
        grid.sort_by(f64::total_cmp);
        let mut prev = f64::NEG_INFINITY;
        for &t in &grid {
            let v = set.ln_sigma(t);
            if !(v > prev) {
                return Err(GaugeError::NotIncreasing { t });
            }
            prev = v;
        }
        Ok(SigmaGauge { set })
    }

    pub fn sigma(&self, t: f64) -> f64 {
        self.set.sigma(t)
    }

    /// `ψ(y) = σ⁻¹(y)`, with `σ(ψ(y)) ≥ y` guaranteed.
    ///
    /// `ln σ` has slope close to α in `ln t`, so a secant iteration started
    /// from the pure power converges in a few rounds; the result is then
    /// nudged up until it dominates. Bisection is the fallback.
    pub fn psi(&self, y: f64) -> f64 {
        if y <= 0.0 || y.is_nan() {
            return 0.0;
        }
        if y.is_infinite() {
            return f64::INFINITY;
        }
        let target = y.ln();
        let a = self.set.alpha;
        let resid = |u: f64| self.set.ln_sigma(u.exp()) - target;
        let tol = 1e-14 * target.abs().max(1.0);
        let (mut u0, mut u1) = (target / a, 0.0);
        let mut r0 = resid(u0);
        u1 += u0 - r0 / a;
        for _ in 0..60 {
            if !r0.is_finite() {
                break;
            }
            let r1 = resid(u1);
            if !r1.is_finite() {
                break;
            }
            if r1.abs() <= tol {
                // overshoot slightly, then creep up if still short
                let mut t = (u1 + (2.0 * tol - r1) / a).exp();
                let mut step = t * 4.0 * f64::EPSILON;
                for _ in 0..200 {
                    if self.set.sigma(t) >= y {
                        return t;
                    }
                    t += step;
                    step *= 2.0;
                }
                break;
            }
            let slope = (r1 - r0) / (u1 - u0);
            let slope = if slope.is_finite() && slope > 0.1 * a && slope < 10.0 * a { slope } else { a };
            (u0, r0) = (u1, r1);
            u1 -= r1 / slope;
        }
        invert_increasing(|t| self.set.sigma(t), y, y.powf(1.0 / a))
    }
}

/// Pass/fail of one condition with its worst observed margin (positive means
/// satisfied with room to spare).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub passed: bool,
    pub worst_margin: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesOutcome {
    pub passed: bool,
    pub partial_sum: f64,
    pub tail_bound: f64,
    pub terms: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    /// `|Φ(1) − 1|`, `|φ(1) − 1|` at machine precision.
    pub normalised: bool,
    /// `ln Φ(R²xy) − ln Φ(x) − ln Φ(y)` over a 64×64 log grid on `[1, 10⁶]`.
    pub multiplicativity: CheckOutcome,
    /// Discrete convexity of `k ↦ ln φ(R^k)` for `k = 1..64`.
    pub ratio_monotonicity: CheckOutcome,
    /// `Σ_k φ(R^k) / Φ(R^{k+n0})` with a tail estimate below `10⁻⁹`.
    pub series: SeriesOutcome,
}

impl ConditionReport {
    pub fn all_passed(&self) -> bool {
        self.normalised && self.multiplicativity.passed && self.ratio_monotonicity.passed && self.series.passed
    }
}

pub fn check_gauge_conditions(g: &GaugeSet) -> ConditionReport {
    let normalised = (g.phi_big.eval(1.0) - 1.0).abs() <= 4.0 * f64::EPSILON
        && (g.phi_small.eval(1.0) - 1.0).abs() <= 4.0 * f64::EPSILON;

    let grid: Vec<f64> = (0..64).map(|i| 10f64.powf(6.0 * i as f64 / 63.0)).collect();
    let ln_r2 = 2.0 * g.r.ln();
    let mut worst = f64::INFINITY;
    for &x in &grid {
        let lx = g.phi_big.ln_eval(x);
        for &y in &grid {
            let lhs = lx + g.phi_big.ln_eval(y);
            let rhs = g.phi_big.ln_eval_ln(ln_r2 + x.ln() + y.ln());
            // relative to the scale of the values, so huge exponents compare fairly
            let m = (rhs - lhs) / rhs.abs().max(1.0);
            worst = worst.min(m);
        }
    }
    let multiplicativity = CheckOutcome { passed: worst >= -1e-12, worst_margin: worst };

    let lphi = |k: f64| g.phi_small.ln_eval_ln(k * g.r.ln());
    let mut worst = f64::INFINITY;
    for k in 1..=64 {
        let k = k as f64;
        let (a, b, c) = (lphi(k - 1.0), lphi(k), lphi(k + 1.0));
        let m = (a + c - 2.0 * b) / b.abs().max(1.0);
        worst = worst.min(m);
    }
    let ratio_monotonicity = CheckOutcome { passed: worst >= -1e-12, worst_margin: worst };

    ConditionReport { normalised, multiplicativity, ratio_monotonicity, series: series_check(g) }
}

fn series_check(g: &GaugeSet) -> SeriesOutcome {
    let ln_r = g.r.ln();
    let n0 = g.n0 as f64;
    let ln_term = |k: usize| {
        let k = k as f64;
        let v = g.phi_small.ln_eval_ln(k * ln_r) - g.phi_big.ln_eval_ln((k + n0) * ln_r);
        // both sides overflowing leaves the term undetermined
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut ln_terms: Vec<f64> = Vec::new();
    let mut partial = 0.0;
    let mut n = 8usize;
    loop {
        while ln_terms.len() < 2 * n + 1 {
            let v = ln_term(ln_terms.len());
            partial += v.exp();
            ln_terms.push(v);
        }
        let tail = tail_estimate(&ln_terms, n);
        if tail < 1e-9 {
            let s: f64 = ln_terms[..=n].iter().map(|v| v.exp()).sum();
            return SeriesOutcome { passed: true, partial_sum: s, tail_bound: tail, terms: n + 1 };
        }
        if n >= 1 << 20 || !partial.is_finite() {
            let s: f64 = ln_terms[..=n].iter().map(|v| v.exp()).sum();
            return SeriesOutcome { passed: false, partial_sum: s, tail_bound: tail, terms: n + 1 };
        }
        n *= 2;
    }
}

/// Bound on `Σ_{k>n} a_k` from `ln a_k`, `k ≤ 2n`.
///
/// Uses the ratio test when the ratios over `(n, 2n]` stay below a constant
/// `ρ < 1`; otherwise fits a power law `a_k ≈ C k^{-s}` from `a_n, a_{2n}`,
/// which is conservative for logarithmically corrected terms.
fn tail_estimate(ln_terms: &[f64], n: usize) -> f64 {
    let ln_a_next = ln_terms[n + 1];
    if ln_a_next == f64::NEG_INFINITY {
        return 0.0;
    }
    let max_ln_ratio = (n + 1..2 * n).map(|k| ln_terms[k + 1] - ln_terms[k]).fold(f64::NEG_INFINITY, f64::max);
    if max_ln_ratio < -1e-3 {
        let rho = max_ln_ratio.exp();
        return ln_a_next.exp() / (1.0 - rho);
    }
    let s = (ln_terms[n] - ln_terms[2 * n]) / 2f64.ln();
    if s <= 1.0 + 1e-3 {
        return f64::INFINITY;
    }
    ln_terms[n].exp() * n as f64 / (s - 1.0)
}
