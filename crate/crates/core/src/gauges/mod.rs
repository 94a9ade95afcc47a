//! Gauge functions: the sharp SLE gauges ψ, ω and the LIL gauge, the
//! Φ/φ moment machinery with its τ integral, and the derived σ / ψ = σ⁻¹.
//!
//! All `log*` clamps make the gauges exact power laws near the right edge
//! of their domain. The kinks sit at `x = e^{-1}` for a single `log*`
//! and at `x = e^{-e}` for `log* log*`.

mod numeric;
mod set;
mod young;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use numeric::{integrate, invert_increasing};
pub use set::{
    check_gauge_conditions, CheckOutcome, ConditionReport, FamilyKind, GaugeFamilySpec, GaugeSet,
    SeriesOutcome, SigmaGauge,
};
pub use young::{Growth, YoungFn};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaugeError {
    #[error("log* needs a positive argument, got {0}")]
    NonPositiveInput(f64),
    #[error("{what} = {value} outside its domain {domain}")]
    OutOfDomain { what: &'static str, value: f64, domain: &'static str },
    #[error("the tau integral diverges for this gauge")]
    DivergentIntegral,
    #[error("sigma is not increasing near t = {t}")]
    NotIncreasing { t: f64 },
    #[error("invalid gauge parameter: {0}")]
    InvalidParameter(String),
}

/// `log*(x) = max(ln x, 1)`.
pub fn log_star(x: f64) -> Result<f64, GaugeError> {
    if x > 0.0 {
        Ok(ln_star(x))
    } else {
        Err(GaugeError::NonPositiveInput(x))
    }
}

#[inline]
pub(crate) fn ln_star(x: f64) -> f64 {
    x.ln().max(1.0)
}

#[inline]
fn ln_star2(x: f64) -> f64 {
    ln_star(ln_star(x))
}

fn check_unit(what: &'static str, x: f64) -> Result<(), GaugeError> {
    if x > 0.0 && x <= 1.0 {
        Ok(())
    } else {
        Err(GaugeError::OutOfDomain { what, value: x, domain: "(0, 1]" })
    }
}

fn check_dim(d: f64) -> Result<(), GaugeError> {
    if d > 1.0 && d <= 2.0 {
        Ok(())
    } else {
        Err(GaugeError::OutOfDomain { what: "d", value: d, domain: "(1, 2]" })
    }
}

/// `ψ(x) = x^d (log* log* (1/x))^{-(d-1)}`.
pub fn psi_variation_gauge(x: f64, d: f64) -> Result<f64, GaugeError> {
    check_unit("x", x)?;
    check_dim(d)?;
    Ok(SleGauges { d }.psi(x))
}

/// `ω(s) = s^{1/d} (log* (1/s))^{1-1/d}`.
pub fn moc_gauge(s: f64, d: f64) -> Result<f64, GaugeError> {
    check_unit("s", s)?;
    check_dim(d)?;
    Ok(SleGauges { d }.omega(s))
}

/// `t^{1/d} (log* log* (1/t))^{1-1/d}`.
pub fn lil_gauge(t: f64, d: f64) -> Result<f64, GaugeError> {
    check_unit("t", t)?;
    check_dim(d)?;
    Ok(SleGauges { d }.lil(t))
}

/// The three sharp gauges for a curve of dimension `d`.
///
/// The closures accept any positive argument; beyond 1 the `log*` clamps
/// make them pure powers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SleGauges {
    pub d: f64,
}

impl SleGauges {
    pub fn new(d: f64) -> Result<Self, GaugeError> {
        check_dim(d)?;
        Ok(SleGauges { d })
    }

    /// Dimension `1 + κ/8`, capped at 2.
    pub fn from_kappa(kappa: f64) -> Result<Self, GaugeError> {
        Self::new((1.0 + kappa / 8.0).min(2.0))
    }

    pub fn psi(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        x.powf(self.d) * ln_star2(1.0 / x).powf(-(self.d - 1.0))
    }

    pub fn omega(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        s.powf(1.0 / self.d) * ln_star(1.0 / s).powf(1.0 - 1.0 / self.d)
    }

    pub fn lil(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        t.powf(1.0 / self.d) * ln_star2(1.0 / t).powf(1.0 - 1.0 / self.d)
    }
}

/// A monotone gauge applied to increments or times.
pub trait Gauge: Send + Sync {
    fn eval(&self, x: f64) -> f64;

    /// Inverse of [`Gauge::eval`]; bisection unless a closed form exists.
    fn inverse(&self, y: f64) -> f64 {
        invert_increasing(|x| self.eval(x), y, 1.0)
    }
}

impl<F: Fn(f64) -> f64 + Send + Sync> Gauge for F {
    fn eval(&self, x: f64) -> f64 {
        self(x)
    }
}

/// Named gauge families usable from configuration files and the CLI.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GaugeSpec {
    /// `x^p`
    Power { p: f64 },
    /// Sharp ψ-variation gauge of dimension `d`.
    Psi { d: f64 },
    /// Sharp modulus of continuity of dimension `d`.
    Omega { d: f64 },
    /// Sharp LIL gauge of dimension `d`.
    Lil { d: f64 },
    /// `√(2 c t log* log* (1/t))`; `c = 1` is the Brownian LIL gauge.
    BrownianLil {
        #[serde(default = "one")]
        c: f64,
    },
    /// Taylor's Brownian variation gauge `x² / (2 log* log* (1/x))`.
    Taylor,
    /// σ built from a Φ family.
    Sigma { gauge: GaugeFamilySpec },
    /// ψ = σ⁻¹ built from a Φ family.
    SigmaInverse { gauge: GaugeFamilySpec },
}

fn one() -> f64 {
    1.0
}

/// A resolved gauge; cheap to clone and share.
#[derive(Clone, Debug)]
pub enum PathGauge {
    Power(f64),
    Psi(SleGauges),
    Omega(SleGauges),
    Lil(SleGauges),
    BrownianLil(f64),
    Taylor,
    Sigma(SigmaGauge),
    SigmaInverse(SigmaGauge),
    /// `g(x / m)` for a positive scale `m`.
    Scaled(Box<PathGauge>, f64),
}

impl GaugeSpec {
    pub fn resolve(&self) -> Result<PathGauge, GaugeError> {
        Ok(match self {
            GaugeSpec::Power { p } if *p > 0.0 => PathGauge::Power(*p),
            GaugeSpec::Power { p } => {
                return Err(GaugeError::InvalidParameter(format!("power p = {p} must be positive")))
            }
            GaugeSpec::Psi { d } => PathGauge::Psi(SleGauges::new(*d)?),
            GaugeSpec::Omega { d } => PathGauge::Omega(SleGauges::new(*d)?),
            GaugeSpec::Lil { d } => PathGauge::Lil(SleGauges::new(*d)?),
            GaugeSpec::BrownianLil { c } if *c > 0.0 => PathGauge::BrownianLil(*c),
            GaugeSpec::BrownianLil { c } => {
                return Err(GaugeError::InvalidParameter(format!("amplitude c = {c} must be positive")))
            }
            GaugeSpec::Taylor => PathGauge::Taylor,
            GaugeSpec::Sigma { gauge } => PathGauge::Sigma(SigmaGauge::new(gauge.build()?)?),
            GaugeSpec::SigmaInverse { gauge } => PathGauge::SigmaInverse(SigmaGauge::new(gauge.build()?)?),
        })
    }
}

impl GaugeSpec {
    /// Reads a gauge from JSON, TOML or the short form `name[:key=value,…]`,
    /// e.g. `taylor`, `power:p=2`, `sigma_inverse:family=exp,c=1,beta=2`.
    /// In the short form the keys of `sigma` and `sigma_inverse` describe
    /// the Φ family.
    pub fn parse(text: &str) -> Result<GaugeSpec, GaugeError> {
        let text = text.trim();
        if let Ok(g) = serde_json::from_str(text) {
            return Ok(g);
        }
        if let Ok(g) = toml::from_str(text) {
            return Ok(g);
        }
        let bad = |m: String| GaugeError::InvalidParameter(m);
        let (name, rest) = text.split_once(':').unwrap_or((text, ""));
        let mut fields = serde_json::Map::new();
        for kv in rest.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(|| bad(format!("expected key=value, got `{kv}`")))?;
            let v = v.trim();
            let value = match v.parse::<f64>() {
                Ok(x) if v.parse::<u64>().is_ok() && k.trim() == "n0" => serde_json::json!(x as u64),
                Ok(x) => serde_json::json!(x),
                Err(_) => serde_json::json!(v),
            };
            fields.insert(k.trim().to_string(), value);
        }
        let name = name.trim().replace('-', "_");
        let obj = if name == "sigma" || name == "sigma_inverse" {
            serde_json::json!({ "family": name, "gauge": fields })
        } else {
            fields.insert("family".into(), serde_json::json!(name));
            serde_json::Value::Object(fields)
        };
        serde_json::from_value(obj).map_err(|e| bad(format!("gauge `{text}`: {e}")))
    }
}

impl PathGauge {
    /// `x ↦ self(x / m)`.
    pub fn scaled(self, m: f64) -> PathGauge {
        PathGauge::Scaled(Box::new(self), m)
    }
}

impl Gauge for PathGauge {
    fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        match self {
            PathGauge::Power(p) => x.powf(*p),
            PathGauge::Psi(g) => g.psi(x),
            PathGauge::Omega(g) => g.omega(x),
            PathGauge::Lil(g) => g.lil(x),
            PathGauge::BrownianLil(c) => (2.0 * c * x * ln_star2(1.0 / x)).sqrt(),
            PathGauge::Taylor => x * x / (2.0 * ln_star2(1.0 / x)),
            PathGauge::Sigma(s) => s.sigma(x),
            PathGauge::SigmaInverse(s) => s.psi(x),
            PathGauge::Scaled(g, m) => g.eval(x / m),
        }
    }

    fn inverse(&self, y: f64) -> f64 {
        match self {
            PathGauge::Power(p) => y.max(0.0).powf(1.0 / p),
            PathGauge::Sigma(s) => s.psi(y),
            PathGauge::SigmaInverse(s) => s.sigma(y),
            PathGauge::Scaled(g, m) => m * g.inverse(y),
            _ => invert_increasing(|x| self.eval(x), y, y.max(1e-12).sqrt()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn log_star_examples() {
        assert_eq!(log_star(1.0).unwrap(), 1.0);
        assert!((log_star(E * E).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(log_star(0.1).unwrap(), 1.0);
        assert!(matches!(log_star(0.0), Err(GaugeError::NonPositiveInput(_))));
        assert!(log_star(-1.0).is_err());
    }

    #[test]
    fn psi_examples() {
        for d in [1.1, 4.0 / 3.0, 1.75, 2.0] {
            assert_eq!(psi_variation_gauge(1.0, d).unwrap(), 1.0);
        }
        let x = (-E.powf(E)).exp();
        let want = (-2.0 * E.powf(E)).exp() / E;
        let got = psi_variation_gauge(x, 2.0).unwrap();
        assert!((got - want).abs() <= 1e-12 * want, "{got} vs {want}");
        assert!(psi_variation_gauge(0.5, 4.0 / 3.0).unwrap() > psi_variation_gauge(0.25, 4.0 / 3.0).unwrap());
        assert!(psi_variation_gauge(0.0, 1.5).is_err());
        assert!(psi_variation_gauge(1.5, 1.5).is_err());
        assert!(psi_variation_gauge(0.5, 2.5).is_err());
    }

    #[test]
    fn moc_examples() {
        assert_eq!(moc_gauge(1.0, 1.5).unwrap(), 1.0);
        let got = moc_gauge((-4f64).exp(), 2.0).unwrap();
        assert!((got - 2.0 * (-2f64).exp()).abs() < 1e-15);
        let got = moc_gauge((-1f64).exp(), 1.5).unwrap();
        assert!((got - (-2.0f64 / 3.0).exp()).abs() < 1e-15);
    }

    #[test]
    fn lil_examples() {
        assert_eq!(lil_gauge(1.0, 2.0).unwrap(), 1.0);
        let t = (-(4f64.exp())).exp();
        let want = (-(4f64.exp()) / 2.0).exp() * 2.0;
        let got = lil_gauge(t, 2.0).unwrap();
        assert!((got - want).abs() <= 1e-12 * want);
        for &t in &[(-E).exp(), 0.1, 0.5, 1.0] {
            let got = lil_gauge(t, 4.0 / 3.0).unwrap();
            assert!((got - t.powf(0.75)).abs() < 1e-15);
        }
    }

    fn log_grid(n: usize) -> Vec<f64> {
        // dense near the kinks at e^{-e} and e^{-1}
        let mut v: Vec<f64> = (0..n).map(|i| 10f64.powf(-12.0 + 12.0 * i as f64 / (n - 1) as f64)).collect();
        for k in [(-E).exp(), (-1f64).exp()] {
            v.extend((0..50).map(|i| k * (1.0 + (i as f64 - 25.0) * 1e-4)));
        }
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn sle_gauges_strictly_increasing() {
        for d in [1.05, 4.0 / 3.0, 1.5, 2.0] {
            let g = SleGauges::new(d).unwrap();
            let grid = log_grid(1000);
            for w in grid.windows(2) {
                assert!(g.psi(w[1]) > g.psi(w[0]), "psi d={d} at {}", w[0]);
                assert!(g.omega(w[1]) > g.omega(w[0]), "omega d={d} at {}", w[0]);
                assert!(g.lil(w[1]) > g.lil(w[0]), "lil d={d} at {}", w[0]);
            }
            assert!(g.psi(1e-300) < 1e-250 && g.omega(1e-300) < 1e-100 && g.lil(1e-300) < 1e-100);
        }
    }

    #[test]
    fn gauges_degenerate_as_d_to_one() {
        for &x in &[1e-8, 1e-3, 0.2, 0.9] {
            let mut prev = f64::INFINITY;
            for k in 1..8 {
                let d = 1.0 + 10f64.powi(-k);
                let err = (SleGauges { d }.psi(x) - x).abs();
                assert!(err <= prev + 1e-300);
                prev = err;
            }
            assert!(prev < 1e-6 * x.max(1e-3), "x={x} err={prev}");
        }
    }

    #[test]
    fn spec_resolution_and_inverse() {
        let g: GaugeSpec = serde_json::from_str(r#"{"family":"power","p":2.0}"#).unwrap();
        let g = g.resolve().unwrap();
        assert_eq!(g.eval(3.0), 9.0);
        assert!((g.inverse(9.0) - 3.0).abs() < 1e-15);
        let t = GaugeSpec::Taylor.resolve().unwrap();
        let y = t.eval(0.01);
        assert!((t.eval(t.inverse(y)) - y).abs() < 1e-12 * y);
        let s = t.clone().scaled(2.0);
        assert!((s.eval(0.02) - y).abs() < 1e-18);
        assert!((s.inverse(y) - 0.02).abs() < 1e-12);
        let b: GaugeSpec = serde_json::from_str(r#"{"family":"brownian_lil"}"#).unwrap();
        assert_eq!(b, GaugeSpec::BrownianLil { c: 1.0 });
    }

    #[test]
    fn spec_text_forms() {
        assert_eq!(GaugeSpec::parse("taylor").unwrap(), GaugeSpec::Taylor);
        assert_eq!(GaugeSpec::parse("power:p=2.2").unwrap(), GaugeSpec::Power { p: 2.2 });
        assert_eq!(GaugeSpec::parse(r#"{"family":"psi","d":1.5}"#).unwrap(), GaugeSpec::Psi { d: 1.5 });
        assert_eq!(GaugeSpec::parse("family = \"omega\"\nd = 1.25").unwrap(), GaugeSpec::Omega { d: 1.25 });
        let s = GaugeSpec::parse("sigma-inverse:family=exp,c=1,beta=2,alpha=0.5,n0=1").unwrap();
        let mut f = GaugeFamilySpec::exp(1.0, 2.0).with_alpha(0.5);
        f.n0 = Some(1);
        assert_eq!(s, GaugeSpec::SigmaInverse { gauge: f });
        assert!(GaugeSpec::parse("power:p").is_err());
        assert!(GaugeSpec::parse("nonsense").is_err());
    }
}
