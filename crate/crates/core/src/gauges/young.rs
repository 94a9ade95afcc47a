//! Convex self-homeomorphisms Φ normalised by Φ(1) = 1, and the growth
//! functions h entering the iterated-logarithm gauges.

use serde::{Deserialize, Serialize};

use super::numeric::invert_increasing;
use super::GaugeError;

/// Nondecreasing positive function on `(0, ∞)` with `∫₁^∞ du / h(u) < ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Growth {
    /// `h(u) = u^q`, `q > 1`.
    Power { q: f64 },
}

impl Growth {
    pub fn validate(&self) -> Result<(), GaugeError> {
        match *self {
            Growth::Power { q } if q > 1.0 && q.is_finite() => Ok(()),
            Growth::Power { q } => Err(GaugeError::InvalidParameter(format!(
                "growth exponent q = {q} must exceed 1"
            ))),
        }
    }

    pub fn eval(&self, u: f64) -> f64 {
        match *self {
            Growth::Power { q } => u.powf(q),
        }
    }

    pub fn ln_eval(&self, u: f64) -> f64 {
        match *self {
            Growth::Power { q } => q * u.ln(),
        }
    }
}

impl Default for Growth {
    fn default() -> Self {
        Growth::Power { q: 2.0 }
    }
}

/// A Young-type function Φ with Φ(0) = 0 and Φ(1) = 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum YoungFn {
    /// `Φ(x) = (e^{c x^β} − 1) / (e^c − 1)`.
    Exp { c: f64, beta: f64 },
    /// `Φ(x) = x^p`.
    Power { p: f64 },
    /// `φ(x) = x^p / h(log* x)`.
    PowerOverGrowth { p: f64, h: Growth },
}

impl YoungFn {
    pub fn validate(&self) -> Result<(), GaugeError> {
        let bad = |m: String| Err(GaugeError::InvalidParameter(m));
        match *self {
            YoungFn::Exp { c, beta } if c > 0.0 && beta > 0.0 => Ok(()),
            YoungFn::Exp { c, beta } => bad(format!("exp family needs c, beta > 0 (got {c}, {beta})")),
            YoungFn::Power { p } if p >= 1.0 => Ok(()),
            YoungFn::Power { p } => bad(format!("power family needs p >= 1 (got {p})")),
            YoungFn::PowerOverGrowth { p, h } if p >= 1.0 => h.validate(),
            YoungFn::PowerOverGrowth { p, .. } => bad(format!("power family needs p >= 1 (got {p})")),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        match *self {
            YoungFn::Exp { c, beta } => (c * x.powf(beta)).exp_m1() / c.exp_m1(),
            YoungFn::Power { p } => x.powf(p),
            YoungFn::PowerOverGrowth { .. } => self.ln_eval(x).exp(),
        }
    }

    /// `ln Φ(x)` without overflow for large arguments.
    pub fn ln_eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        self.ln_eval_ln(x.ln())
    }

    /// `ln Φ(e^{ln_x})`, for arguments whose exponential would overflow.
    pub fn ln_eval_ln(&self, ln_x: f64) -> f64 {
        match *self {
            YoungFn::Exp { c, beta } => {
                let a = c * (beta * ln_x).exp();
                let ln_num = if a > 30.0 { a + (-(-a).exp()).ln_1p() } else { a.exp_m1().ln() };
                ln_num - c.exp_m1().ln()
            }
            YoungFn::Power { p } => p * ln_x,
            YoungFn::PowerOverGrowth { p, h } => p * ln_x - h.ln_eval(ln_x.max(1.0)),
        }
    }

    pub fn inverse(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        self.inverse_ln(y.ln())
    }

    /// `Φ⁻¹(e^{ln_y})`, usable when `y` itself would overflow.
    pub fn inverse_ln(&self, ln_y: f64) -> f64 {
        match *self {
            YoungFn::Exp { c, beta } => {
                let ln_scale = c.exp_m1().ln();
                let arg = ln_y + ln_scale;
                let a = if arg > 30.0 { arg + (-arg).exp().ln_1p() } else { arg.exp().ln_1p() };
                (a / c).powf(1.0 / beta)
            }
            YoungFn::Power { p } => (ln_y / p).exp(),
            YoungFn::PowerOverGrowth { p, .. } => {
                // bisection on the increasing map x -> ln φ(x)
                let g = |v: f64| self.ln_eval(v);
                let guess = (ln_y / p).exp().max(f64::MIN_POSITIVE);
                invert_ln(g, ln_y, guess)
            }
        }
    }
}

/// Inverts an increasing function given on the log scale of its value.
fn invert_ln(g: impl Fn(f64) -> f64, ln_y: f64, guess: f64) -> f64 {
    // `g(x) - ln_y` is compared through a shifted exponential to reuse
    // the multiplicative bisection.
    invert_increasing(|x| (g(x) - ln_y).exp(), 1.0, guess)
}
