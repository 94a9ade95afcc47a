//! Sampled planar paths and elementary geometric queries.
//!
//! A [`SampledPath`] is the one path representation used throughout the
//! crate: a strictly increasing time grid with a planar point per sample.
//! Real-valued processes are stored with `y = 0`.

use std::io::{Read, Write};
use std::ops::{Add, Mul, Range, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PathError {
    #[error("times has {times} entries but points has {points}")]
    LengthMismatch { times: usize, points: usize },
    #[error("a path needs at least one sample")]
    Empty,
    #[error("times are not strictly increasing at index {index}")]
    NonMonotoneTimes { index: usize },
    #[error("non-finite value at sample {index}")]
    NonFiniteValue { index: usize },
    #[error("window [{lo}, {hi}] contains no samples")]
    EmptyWindow { lo: f64, hi: f64 },
    #[error("interval has lo = {lo} > hi = {hi}")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// A point of the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Embeds a real value on the horizontal axis.
    pub const fn real(x: f64) -> Self {
        Point { x, y: 0.0 }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Rotation about the origin by `angle` radians.
    pub fn rotate(self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    fn cross(o: Point, a: Point, b: Point) -> f64 {
        (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::new(x, y)
    }
}

/// Closed time interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, PathError> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(PathError::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// The whole real line.
    pub fn everything() -> Self {
        Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }
}

/// Immutable time-indexed planar path.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledPath {
    times: Vec<f64>,
    points: Vec<Point>,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    t: f64,
    x: f64,
    y: f64,
}

impl SampledPath {
    pub fn new(
        times: Vec<f64>,
        points: Vec<Point>,
        label: impl Into<String>,
    ) -> Result<Self, PathError> {
        if times.len() != points.len() {
            return Err(PathError::LengthMismatch { times: times.len(), points: points.len() });
        }
        if times.is_empty() {
            return Err(PathError::Empty);
        }
        for (i, (t, p)) in times.iter().zip(&points).enumerate() {
            if !t.is_finite() || !p.is_finite() {
                return Err(PathError::NonFiniteValue { index: i });
            }
        }
        if let Some(i) = times.windows(2).position(|w| w[1] <= w[0]) {
            return Err(PathError::NonMonotoneTimes { index: i + 1 });
        }
        Ok(SampledPath { times, points, label: label.into() })
    }

    /// Real-valued path stored on the horizontal axis.
    pub fn from_real(
        times: Vec<f64>,
        values: &[f64],
        label: impl Into<String>,
    ) -> Result<Self, PathError> {
        let points = values.iter().map(|&v| Point::real(v)).collect();
        Self::new(times, points, label)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn start_time(&self) -> f64 {
        self.times[0]
    }

    pub fn end_time(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    pub fn span(&self) -> Interval {
        Interval { lo: self.start_time(), hi: self.end_time() }
    }

    /// Sample indices whose times lie in the closed window.
    pub fn window_indices(&self, window: Interval) -> Range<usize> {
        let a = self.times.partition_point(|&t| t < window.lo);
        let b = self.times.partition_point(|&t| t <= window.hi);
        a..b.max(a)
    }

    /// Linear interpolation of the path at time `t`, clamped to the grid.
    pub fn value_at(&self, t: f64) -> Point {
        let n = self.len();
        if t <= self.times[0] {
            return self.points[0];
        }
        if t >= self.times[n - 1] {
            return self.points[n - 1];
        }
        let i = self.times.partition_point(|&s| s <= t);
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let w = (t - t0) / (t1 - t0);
        self.points[i - 1] * (1.0 - w) + self.points[i] * w
    }

    /// Largest distance between two samples in the window.
    pub fn oscillation(&self, window: Interval) -> Result<f64, PathError> {
        let range = self.window_indices(window);
        if range.is_empty() {
            return Err(PathError::EmptyWindow { lo: window.lo, hi: window.hi });
        }
        Ok(point_set_diameter(&self.points[range]))
    }

    /// Diameter of the sampled point set over the window.
    ///
    /// For a sampled path this coincides with [`SampledPath::oscillation`].
    pub fn diameter(&self, window: Interval) -> Result<f64, PathError> {
        self.oscillation(window)
    }

    /// First time `|η(t)|` reaches `radius`, with `|η|` interpolated
    /// linearly between the bracketing samples. `None` if never reached.
    pub fn hitting_time(&self, radius: f64) -> Option<f64> {
        let first = self.points[0].norm();
        if first >= radius {
            return Some(self.times[0]);
        }
        let mut prev = first;
        for i in 1..self.len() {
            let cur = self.points[i].norm();
            if cur >= radius {
                let w = (radius - prev) / (cur - prev);
                let (t0, t1) = (self.times[i - 1], self.times[i]);
                return Some((t0 + w * (t1 - t0)).min(t1));
            }
            prev = cur;
        }
        None
    }

    /// Applies `f` to every point, keeping times and label.
    pub fn map_points(&self, f: impl Fn(Point) -> Point) -> Result<SampledPath, PathError> {
        let points = self.points.iter().map(|&p| f(p)).collect();
        SampledPath::new(self.times.clone(), points, self.label.clone())
    }

    /// Sub-path made of the samples inside the window.
    pub fn restrict(&self, window: Interval) -> Result<SampledPath, PathError> {
        let r = self.window_indices(window);
        if r.is_empty() {
            return Err(PathError::EmptyWindow { lo: window.lo, hi: window.hi });
        }
        SampledPath::new(
            self.times[r.clone()].to_vec(),
            self.points[r].to_vec(),
            self.label.clone(),
        )
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Writes `t,x,y` rows; floats use the shortest round-trip decimal form.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), PathError> {
        let mut w = csv::Writer::from_writer(writer);
        for (&t, p) in self.times.iter().zip(&self.points) {
            w.serialize(CsvRow { t, x: p.x, y: p.y })?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R, label: impl Into<String>) -> Result<Self, PathError> {
        let mut r = csv::Reader::from_reader(reader);
        let mut times = Vec::new();
        let mut points = Vec::new();
        for row in r.deserialize() {
            let row: CsvRow = row?;
            times.push(row.t);
            points.push(Point::new(row.x, row.y));
        }
        SampledPath::new(times, points, label)
    }
}

/// Validating constructor.
pub fn make_path(
    times: Vec<f64>,
    points: Vec<Point>,
    label: impl Into<String>,
) -> Result<SampledPath, PathError> {
    SampledPath::new(times, points, label)
}

/// Maximum pairwise distance of a point set (0 for fewer than two points).
pub fn point_set_diameter(points: &[Point]) -> f64 {
    match points.len() {
        0 | 1 => 0.0,
        2 => points[0].dist(points[1]),
        _ => {
            let hull = convex_hull(points);
            hull_diameter(&hull)
        }
    }
}

/// Andrew's monotone chain; returns the hull counter-clockwise without
/// repeating the first vertex. Collinear input yields its two extremes.
fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && Point::cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower
            && Point::cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

fn hull_diameter(hull: &[Point]) -> f64 {
    let h = hull.len();
    if h <= 32 {
        let mut best: f64 = 0.0;
        for i in 0..h {
            for j in i + 1..h {
                best = best.max(hull[i].dist(hull[j]));
            }
        }
        return best;
    }
    // Rotating calipers over antipodal pairs.
    let area = |i: usize, j: usize, k: usize| Point::cross(hull[i], hull[j], hull[k]).abs();
    let mut best: f64 = 0.0;
    let mut j = 1;
    for i in 0..h {
        let ni = (i + 1) % h;
        while area(i, ni, (j + 1) % h) > area(i, ni, j) {
            j = (j + 1) % h;
        }
        best = best.max(hull[i].dist(hull[j])).max(hull[ni].dist(hull[j]));
    }
    best
}
