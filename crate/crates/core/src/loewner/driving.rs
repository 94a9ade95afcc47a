//! Driving functions of chordal SLE_κ(ρ) by Euler–Maruyama.

use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::LoewnerError;
use crate::parallel::rng_from_seed;

/// Subdivision depth limit for steps that come close to a force point.
const MAX_DEPTH: u32 = 3;

/// `W` and the force-point trajectories `U^j` at step boundaries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DrivingPath {
    /// Capacity-time increments `δ_k`; step `k` runs from `t_{k-1}` to `t_k`.
    pub step_durations: Vec<f64>,
    /// `W(t_0), …, W(t_N)`.
    pub w: Vec<f64>,
    /// One trajectory per force point, each of length `N + 1`.
    pub u: Vec<Vec<f64>>,
    pub kappa: f64,
    pub rhos: Vec<f64>,
    pub seed: u64,
}

/// Parameters of [`sample_driving_with`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DrivingParams {
    pub kappa: f64,
    #[serde(default)]
    pub rhos: Vec<f64>,
    /// Initial force points. `-0.0` and `+0.0` stand for the one-sided
    /// limits `0⁻` and `0⁺` at the seed `W₀ = 0`.
    #[serde(default)]
    pub u0: Vec<f64>,
    pub t_max: f64,
    pub dt: f64,
    #[serde(default = "default_substeps")]
    pub substeps: usize,
}

fn default_substeps() -> usize {
    16
}

impl DrivingPath {
    /// Deterministic driving from values at uniform steps of `dt`.
    pub fn from_values(w: Vec<f64>, dt: f64) -> Result<Self, LoewnerError> {
        if !(dt > 0.0) || w.len() < 2 {
            return Err(LoewnerError::InvalidParameter("need dt > 0 and at least one step".into()));
        }
        let d = DrivingPath {
            step_durations: vec![dt; w.len() - 1],
            w,
            u: Vec::new(),
            kappa: 0.0,
            rhos: Vec::new(),
            seed: 0,
        };
        d.validate()?;
        Ok(d)
    }

    /// `W ≡ c` up to capacity time `t`.
    pub fn constant(c: f64, t: f64, dt: f64) -> Result<Self, LoewnerError> {
        let n = (t / dt).round().max(1.0) as usize;
        Self::from_values(vec![c; n + 1], t / n as f64)
    }

    pub fn validate(&self) -> Result<(), LoewnerError> {
        let n = self.step_durations.len();
        if self.w.len() != n + 1 || self.u.iter().any(|u| u.len() != n + 1) || self.u.len() != self.rhos.len() {
            return Err(LoewnerError::InvalidParameter("inconsistent driving lengths".into()));
        }
        if self.step_durations.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
            return Err(LoewnerError::InvalidParameter("step durations must be positive".into()));
        }
        if self.w.iter().any(|w| !w.is_finite()) {
            return Err(LoewnerError::InvalidParameter("driving values must be finite".into()));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        self.step_durations.len()
    }

    /// Capacity times `t_0 = 0, t_1, …, t_N`.
    pub fn times(&self) -> Vec<f64> {
        let mut t = Vec::with_capacity(self.w.len());
        let mut acc = 0.0;
        t.push(0.0);
        for d in &self.step_durations {
            acc += d;
            t.push(acc);
        }
        t
    }

    pub fn total_time(&self) -> f64 {
        self.step_durations.iter().sum()
    }

    /// Brownian rescaling `W'(t) = r W(t / r²)` with steps `r² δ_k`.
    pub fn scaled(&self, r: f64) -> DrivingPath {
        DrivingPath {
            step_durations: self.step_durations.iter().map(|d| r * r * d).collect(),
            w: self.w.iter().map(|w| r * w).collect(),
            u: self.u.iter().map(|u| u.iter().map(|x| r * x).collect()).collect(),
            ..self.clone()
        }
    }
}

/// Samples `dW = √κ dB + Σ ρ_j/(W − U^j) dt`, `dU^j = 2/(U^j − W) dt` on
/// `[0, T]` with uniform steps near `dt`, substepping 16× near force points.
pub fn sample_driving(
    kappa: f64,
    rhos: &[f64],
    u0: &[f64],
    t_max: f64,
    dt: f64,
    seed: u64,
) -> Result<DrivingPath, LoewnerError> {
    let params = DrivingParams {
        kappa,
        rhos: rhos.to_vec(),
        u0: u0.to_vec(),
        t_max,
        dt,
        substeps: default_substeps(),
    };
    sample_driving_with(&params, seed)
}

struct State {
    w: f64,
    /// Signed gaps `X_j = W − U^j`.
    x: Vec<f64>,
}

pub fn sample_driving_with(p: &DrivingParams, seed: u64) -> Result<DrivingPath, LoewnerError> {
    let bad = |m: String| Err(LoewnerError::InvalidParameter(m));
    if !(p.kappa >= 0.0 && p.kappa.is_finite()) {
        return bad(format!("kappa = {} must be a finite nonnegative number", p.kappa));
    }
    if !(p.t_max > 0.0 && p.dt > 0.0 && p.t_max.is_finite()) {
        return bad("need T > 0 and dt > 0".into());
    }
    if p.rhos.len() != p.u0.len() {
        return bad(format!("{} weights for {} force points", p.rhos.len(), p.u0.len()));
    }
    if p.substeps < 2 {
        return bad("substeps must be at least 2".into());
    }
    let n = (p.t_max / p.dt).round().max(1.0) as usize;
    let h = p.t_max / n as f64;
    let mut rng = rng_from_seed(seed);
    let sk = p.kappa.sqrt();

    let mut st = State { w: 0.0, x: p.u0.iter().map(|u| -u).collect() };
    let mut w = Vec::with_capacity(n + 1);
    let mut u: Vec<Vec<f64>> = p.u0.iter().map(|_| Vec::with_capacity(n + 1)).collect();
    let record = |st: &State, w: &mut Vec<f64>, u: &mut Vec<Vec<f64>>| {
        w.push(st.w);
        for (uj, xj) in u.iter_mut().zip(&st.x) {
            uj.push(st.w - xj);
        }
    };
    record(&st, &mut w, &mut u);

    let mut first = 0;
    if st.x.contains(&0.0) {
        start_from_seed(&mut st, p, h, &mut rng)?;
        record(&st, &mut w, &mut u);
        first = 1;
    }
    for k in first..n {
        advance(&mut st, p, sk, h, 0, &mut rng).map_err(|_| LoewnerError::ForcePointCollision { step: k + 1 })?;
        if !st.w.is_finite() || st.x.iter().any(|x| !x.is_finite()) {
            return Err(LoewnerError::ForcePointCollision { step: k + 1 });
        }
        record(&st, &mut w, &mut u);
    }
    Ok(DrivingPath { step_durations: vec![h; n], w, u, kappa: p.kappa, rhos: p.rhos.clone(), seed })
}

/// First step for force points sitting at the seed.
///
/// The gap of such a point is a Bessel-type process `dX = √κ dB + a/X dt`
/// with `a = ρ + 2`, started at 0; its value after one step is drawn from
/// the exact law `X_h² / (κh) ~ χ²(1 + 2a/κ)`. `W` and `U` then split the
/// gap in the drift proportion `ρ : 2`, which keeps `W − U` exact. Force
/// points away from the seed take an ordinary Euler step.
fn start_from_seed(st: &mut State, p: &DrivingParams, h: f64, rng: &mut impl Rng) -> Result<(), LoewnerError> {
    let mut dw = 0.0;
    let mut new_x = st.x.clone();
    for (j, &x) in st.x.iter().enumerate() {
        if x != 0.0 {
            continue;
        }
        let a = p.rhos[j] + 2.0;
        if a <= 0.0 {
            return Err(LoewnerError::ForcePointCollision { step: 0 });
        }
        let mag = if p.kappa > 0.0 {
            let chi = ChiSquared::new(1.0 + 2.0 * a / p.kappa)
                .map_err(|e| LoewnerError::InvalidParameter(e.to_string()))?;
            (p.kappa * h * chi.sample(rng)).sqrt()
        } else {
            (2.0 * a * h).sqrt()
        };
        // −0.0 encodes U = 0⁻, i.e. a positive gap
        let gap = if p.u0[j].is_sign_negative() { mag } else { -mag };
        new_x[j] = gap;
        dw += p.rhos[j] / a * gap;
    }
    let drift_w: f64 = p.rhos.iter().zip(&st.x).filter(|(_, xi)| **xi != 0.0).map(|(r, xi)| r / xi * h).sum();
    for (j, &x) in st.x.iter().enumerate() {
        if x != 0.0 {
            new_x[j] = x + dw + drift_w + 2.0 * h / x;
        }
    }
    st.w += dw + drift_w;
    st.x = new_x;
    Ok(())
}

struct Collision;

/// One step of length `h` at subdivision `depth`.
///
/// Top-level steps are explicit Euler–Maruyama. A step whose gap falls
/// below `√h`, or whose explicit update would push a force point across
/// `W`, is redone as `substeps` shorter steps. Substeps treat each gap's
/// own singular drift implicitly: `X' = X + √κ ΔB + rest + a h / X'` is a
/// quadratic with a root of the same sign as `X` whenever `a = ρ + 2 > 0`.
fn advance(st: &mut State, p: &DrivingParams, sk: f64, h: f64, depth: u32, rng: &mut impl Rng) -> Result<(), Collision> {
    let near = st.x.iter().any(|x| x.abs() < h.sqrt());
    if near && depth < MAX_DEPTH {
        let sub = h / p.substeps as f64;
        for _ in 0..p.substeps {
            advance(st, p, sk, sub, depth + 1, rng)?;
        }
        return Ok(());
    }
    let z: f64 = rng.sample(StandardNormal);
    let noise = sk * h.sqrt() * z;
    let drift_w: f64 = p.rhos.iter().zip(&st.x).map(|(r, x)| r / x).sum::<f64>() * h;
    if depth == 0 {
        let new_x: Vec<f64> = st.x.iter().map(|x| x + noise + drift_w + 2.0 * h / x).collect();
        if new_x.iter().zip(&st.x).all(|(a, b)| a.signum() == b.signum()) {
            st.w += noise + drift_w;
            st.x = new_x;
            return Ok(());
        }
        // crossing: drop this increment and redo the step as implicit substeps
        let sub = h / p.substeps as f64;
        for _ in 0..p.substeps {
            advance(st, p, sk, sub, 1, rng)?;
        }
        return Ok(());
    }
    let mut new_x = st.x.clone();
    let mut dw = noise;
    for (j, &x) in st.x.iter().enumerate() {
        let a = p.rhos[j] + 2.0;
        let other: f64 = p.rhos.iter().zip(&st.x).enumerate().filter(|(i, _)| *i != j).map(|(_, (r, xi))| r / xi).sum::<f64>() * h;
        let b = x + noise + other;
        let xn = if a > 0.0 {
            let disc = (b * b + 4.0 * a * h).sqrt();
            if x > 0.0 {
                0.5 * (b + disc)
            } else {
                0.5 * (b - disc)
            }
        } else {
            let xn = b + a * h / x;
            if xn.signum() != x.signum() {
                return Err(Collision);
            }
            xn
        };
        new_x[j] = xn;
        dw += p.rhos[j] * h / xn;
    }
    st.w += dw;
    st.x = new_x;
    Ok(())
}
