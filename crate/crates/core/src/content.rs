//! Minkowski content of sampled curves and the natural parametrisation.
//!
//! The ε-neighbourhood of the polyline through the samples is rasterised
//! on a square grid; a cell counts when its centre lies within ε of the
//! curve. Content at level ε is `ε^{d−2} · cells · h²`. Prefix profiles
//! mark cells incrementally, so each cell is attributed to the first step
//! whose segment reaches it and every profile is exactly monotone.

use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::paths::{Point, SampledPath};

#[derive(Debug, Error)]
pub enum ContentError {
    #[error("grid cell {grid_h} is coarser than eps_min / 4 = {}", .eps_min / 4.0)]
    ResolutionError { grid_h: f64, eps_min: f64 },
    #[error("need at least two positive, distinct eps levels")]
    TooFewLevels,
    #[error("total content is zero")]
    DegenerateProfile,
    #[error(transparent)]
    Path(#[from] crate::paths::PathError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Cumulative content along prefixes of a path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContentProfile {
    pub prefix_times: Vec<f64>,
    /// `content[l][k]`: content of `η[0, t_k]` at `eps_levels[l]`.
    pub content: Vec<Vec<f64>>,
    /// Levels sorted ascending.
    pub eps_levels: Vec<f64>,
    /// Cell size at the finest level.
    pub grid_h: f64,
}

/// Four levels `ε_min · 2^l` with the default cell `ε_min / 8`.
pub fn default_levels(eps_min: f64) -> (Vec<f64>, f64) {
    ((0..4).map(|l| eps_min * (1u32 << l) as f64).collect(), eps_min / 8.0)
}

/// One ε level: a dense bitset over the bounding box of the curve.
struct Raster {
    eps: f64,
    h: f64,
    x0: f64,
    y0: f64,
    nx: usize,
    ny: usize,
    bits: Vec<u64>,
    marked: u64,
}

impl Raster {
    fn new(eps: f64, h: f64, lo: Point, hi: Point) -> Self {
        let pad = eps + 2.0 * h;
        let (x0, y0) = (lo.x - pad, lo.y - pad);
        let nx = ((hi.x + pad - x0) / h).ceil() as usize + 1;
        let ny = ((hi.y + pad - y0) / h).ceil() as usize + 1;
        Raster { eps, h, x0, y0, nx, ny, bits: vec![0; (nx * ny).div_ceil(64)], marked: 0 }
    }

    /// Marks cells within ε of the segment `[p, q]`; returns how many were new.
    fn mark_segment(&mut self, p: Point, q: Point) -> u64 {
        let len = p.dist(q);
        // pieces no longer than ε keep the scanned boxes tight
        let pieces = (len / self.eps).ceil().max(1.0) as usize;
        let mut new = 0;
        for i in 0..pieces {
            let a = p + (q - p) * (i as f64 / pieces as f64);
            let b = p + (q - p) * ((i + 1) as f64 / pieces as f64);
            new += self.mark_piece(a, b);
        }
        self.marked += new;
        new
    }

    fn mark_piece(&mut self, a: Point, b: Point) -> u64 {
        let e = self.eps;
        let e2 = e * e;
        let ix0 = ((a.x.min(b.x) - e - self.x0) / self.h).floor().max(0.0) as usize;
        let ix1 = (((a.x.max(b.x) + e - self.x0) / self.h).ceil() as usize).min(self.nx - 1);
        let iy0 = ((a.y.min(b.y) - e - self.y0) / self.h).floor().max(0.0) as usize;
        let iy1 = (((a.y.max(b.y) + e - self.y0) / self.h).ceil() as usize).min(self.ny - 1);
        let d = b - a;
        let dd = d.x * d.x + d.y * d.y;
        let mut new = 0;
        for iy in iy0..=iy1 {
            let cy = self.y0 + (iy as f64 + 0.5) * self.h;
            for ix in ix0..=ix1 {
                let cx = self.x0 + (ix as f64 + 0.5) * self.h;
                let (px, py) = (cx - a.x, cy - a.y);
                let s = if dd > 0.0 { ((px * d.x + py * d.y) / dd).clamp(0.0, 1.0) } else { 0.0 };
                let (rx, ry) = (px - s * d.x, py - s * d.y);
                if rx * rx + ry * ry <= e2 {
                    let idx = iy * self.nx + ix;
                    let (w, bit) = (idx / 64, 1u64 << (idx % 64));
                    if self.bits[w] & bit == 0 {
                        self.bits[w] |= bit;
                        new += 1;
                    }
                }
            }
        }
        new
    }

    fn content(&self, d: f64) -> f64 {
        self.eps.powf(d - 2.0) * self.marked as f64 * self.h * self.h
    }
}

fn check_levels(eps_levels: &[f64], grid_h: f64) -> Result<Vec<f64>, ContentError> {
    let mut eps: Vec<f64> = eps_levels.to_vec();
    eps.sort_by(f64::total_cmp);
    eps.dedup();
    if eps.len() < 2 || eps.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(ContentError::TooFewLevels);
    }
    if !(grid_h > 0.0) || grid_h > eps[0] / 4.0 {
        return Err(ContentError::ResolutionError { grid_h, eps_min: eps[0] });
    }
    Ok(eps)
}

/// Rasters for each level. The cell size grows with ε so that every level
/// sees the same ε / h ratio as the finest one.
fn rasters(points: &[Point], eps: &[f64], grid_h: f64) -> Vec<Raster> {
    let lo = points.iter().fold(Point::new(f64::INFINITY, f64::INFINITY), |m, p| Point::new(m.x.min(p.x), m.y.min(p.y)));
    let hi = points
        .iter()
        .fold(Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY), |m, p| Point::new(m.x.max(p.x), m.y.max(p.y)));
    eps.iter().map(|&e| Raster::new(e, grid_h * e / eps[0], lo, hi)).collect()
}

/// Richardson extrapolation `C(0) ≈ (ε₂ C(ε₁) − ε₁ C(ε₂)) / (ε₂ − ε₁)` over the
/// two finest levels, assuming `C(ε) = C(0) + aε + o(ε)`.
pub fn richardson(eps: &[f64], values: &[f64]) -> f64 {
    let (e1, e2) = (eps[0], eps[1]);
    (e2 * values[0] - e1 * values[1]) / (e2 - e1)
}

/// Extrapolated `d`-dimensional Minkowski content of the polyline through
/// `points` (a single point is treated as its own ε-disc).
pub fn minkowski_content(points: &[Point], d: f64, eps_levels: &[f64], grid_h: f64) -> Result<f64, ContentError> {
    let eps = check_levels(eps_levels, grid_h)?;
    if points.is_empty() {
        return Ok(0.0);
    }
    let per_level = level_contents(points, d, &eps, grid_h);
    Ok(richardson(&eps, &per_level))
}

/// Unextrapolated content at each (sorted) level.
pub fn level_contents(points: &[Point], d: f64, eps: &[f64], grid_h: f64) -> Vec<f64> {
    let mut rs = rasters(points, eps, grid_h);
    for r in &mut rs {
        if points.len() == 1 {
            r.mark_segment(points[0], points[0]);
        }
        for w in points.windows(2) {
            r.mark_segment(w[0], w[1]);
        }
    }
    rs.iter().map(|r| r.content(d)).collect()
}

/// Content of every prefix `η[0, t_k]`; `content[l][0] = 0` and the prefix
/// ending at sample `k` is the union of the first `k` segments.
pub fn content_profile(path: &SampledPath, d: f64, eps_levels: &[f64], grid_h: f64) -> Result<ContentProfile, ContentError> {
    let eps = check_levels(eps_levels, grid_h)?;
    let pts = path.points();
    let mut rs = rasters(pts, &eps, grid_h);
    let content = rs
        .iter_mut()
        .map(|r| {
            let scale = r.eps.powf(d - 2.0) * r.h * r.h;
            let mut out = Vec::with_capacity(pts.len());
            out.push(0.0);
            for w in pts.windows(2) {
                r.mark_segment(w[0], w[1]);
                out.push(scale * r.marked as f64);
            }
            out
        })
        .collect();
    Ok(ContentProfile { prefix_times: path.times().to_vec(), content, eps_levels: eps, grid_h })
}

impl ContentProfile {
    pub fn len(&self) -> usize {
        self.prefix_times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefix_times.is_empty()
    }

    /// Extrapolated content of the prefix ending at sample `k`.
    pub fn extrapolated_at(&self, k: usize) -> f64 {
        let v = [self.content[0][k], self.content[1][k]];
        richardson(&self.eps_levels, &v)
    }

    pub fn extrapolated(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.extrapolated_at(k)).collect()
    }

    /// Content at the finest level; exactly nondecreasing.
    pub fn finest(&self) -> &[f64] {
        &self.content[0]
    }

    pub fn total(&self) -> f64 {
        self.extrapolated_at(self.len() - 1)
    }

    /// CSV with header `t,cont_eps1,…,cont_extrap`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<(), ContentError> {
        let mut wr = csv::Writer::from_writer(&mut w);
        let mut header = vec!["t".to_string()];
        header.extend((1..=self.eps_levels.len()).map(|i| format!("cont_eps{i}")));
        header.push("cont_extrap".into());
        wr.write_record(&header).map_err(|e| ContentError::Path(e.into()))?;
        for k in 0..self.len() {
            let mut row = vec![self.prefix_times[k].to_string()];
            row.extend(self.content.iter().map(|c| c[k].to_string()));
            row.push(self.extrapolated_at(k).to_string());
            wr.write_record(&row).map_err(|e| ContentError::Path(e.into()))?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// `|Cont[0,u] − Cont[0,t] − Cont[t,u]|` per level, with `t` the sample at
/// `split` and `u` the last sample. The defect is the ε-band where the two
/// halves overlap.
pub fn additivity_defect(
    path: &SampledPath,
    split: usize,
    d: f64,
    eps_levels: &[f64],
    grid_h: f64,
) -> Result<Vec<f64>, ContentError> {
    let eps = check_levels(eps_levels, grid_h)?;
    let pts = path.points();
    let split = split.min(pts.len() - 1);
    let whole = level_contents(pts, d, &eps, grid_h);
    let a = level_contents(&pts[..=split], d, &eps, grid_h);
    let b = level_contents(&pts[split..], d, &eps, grid_h);
    Ok((0..eps.len()).map(|l| (whole[l] - a[l] - b[l]).abs()).collect())
}

/// The path re-timed by cumulative content at the finest level.
///
/// Runs of samples with equal content collapse to their last sample so the
/// new times are strictly increasing.
pub fn natural_reparametrize(path: &SampledPath, profile: &ContentProfile) -> Result<SampledPath, ContentError> {
    let c = profile.finest();
    if c.len() != path.len() || *c.last().unwrap_or(&0.0) <= 0.0 {
        return Err(ContentError::DegenerateProfile);
    }
    let mut times = Vec::with_capacity(c.len());
    let mut points = Vec::with_capacity(c.len());
    for k in 0..c.len() {
        if k + 1 < c.len() && c[k + 1] == c[k] {
            continue;
        }
        times.push(c[k]);
        points.push(path.points()[k]);
    }
    Ok(SampledPath::new(times, points, path.label())?)
}
