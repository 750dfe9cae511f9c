//! Planar geometry: convex hulls, the point-to-hull distance used as the
//! surrounding monitor, and angle bookkeeping (unwrapping, wrapped
//! differences).

use crate::Vec2;
use std::f64::consts::{PI, TAU};

/// Sign tolerance for cross-product orientation tests (m^2). Adequate for
/// coordinates at meter scale; exact predicates are a non-goal here.
const ORIENT_EPS: f64 = 1e-12;

fn cross(o: &Vec2, a: &Vec2, b: &Vec2) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Convex hull of a point set by Andrew's monotone chain.
///
/// Returns the hull vertices in counterclockwise order. Degenerate inputs
/// are handled: a single point yields one vertex, collinear points yield
/// the two extreme points of the segment. Strictly collinear boundary
/// points are dropped.
pub fn convex_hull(points: &[Vec2]) -> Vec<Vec2> {
    let mut pts: Vec<Vec2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup_by(|a, b| a.x == b.x && a.y == b.y);
    let n = pts.len();
    if n <= 2 {
        return pts;
    }

    let mut hull: Vec<Vec2> = Vec::with_capacity(2 * n);
    // lower chain
    for &p in &pts {
        while hull.len() >= 2
            && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) <= ORIENT_EPS
        {
            hull.pop();
        }
        hull.push(p);
    }
    // upper chain
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len
            && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) <= ORIENT_EPS
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    // Fully collinear input collapses the chains to the two extremes.
    if hull.len() < 2 {
        return vec![pts[0], pts[n - 1]];
    }
    hull
}

fn segment_distance(p: &Vec2, a: &Vec2, b: &Vec2) -> f64 {
    let d = b - a;
    let len2 = d.norm_squared();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).dot(&d) / len2).clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

/// Euclidean distance from `target` to the convex hull of `points`.
///
/// Zero exactly when the target lies inside (or on the boundary of) the
/// hull; otherwise the minimum distance over hull edges and vertices.
pub fn hull_distance(target: &Vec2, points: &[Vec2]) -> f64 {
    let hull = convex_hull(points);
    match hull.len() {
        0 => f64::NAN,
        1 => (target - hull[0]).norm(),
        2 => segment_distance(target, &hull[0], &hull[1]),
        m => {
            // CCW hull: inside iff the target is on the left of every edge.
            let inside = (0..m).all(|i| cross(&hull[i], &hull[(i + 1) % m], target) >= -ORIENT_EPS);
            if inside {
                return 0.0;
            }
            (0..m)
                .map(|i| segment_distance(target, &hull[i], &hull[(i + 1) % m]))
                .fold(f64::INFINITY, f64::min)
        }
    }
}

/// Continuation of `raw` (given modulo 2π) nearest to `prev`.
///
/// Keeps angle trajectories continuous on the real line: the output is
/// congruent to `raw` mod 2π and within π of `prev`. The revolution count
/// starts at zero, so the first sample of a trajectory is used as-is.
pub fn unwrap_angle(prev: f64, raw: f64) -> f64 {
    raw + TAU * ((prev - raw) / TAU).round()
}

/// Difference `a - b` reduced into `[-π, π)`.
pub fn wrapped_diff(a: f64, b: f64) -> f64 {
    let d = a - b;
    d - TAU * ((d + PI) / TAU).floor()
}

/// Reduce a single angle into `[-π, π)` (display/metrics convention).
pub fn wrap_to_pi(a: f64) -> f64 {
    wrapped_diff(a, 0.0)
}

/// Tracks an unwrapped angle trajectory across samples, with the
/// revolution count zero at the first observation.
#[derive(Debug, Clone, Default)]
pub struct AngleTracker {
    last: Option<f64>,
}

impl AngleTracker {
    pub fn new() -> Self {
        Self { last: None }
    }

    /// Current unwrapped value, if any sample has been observed.
    pub fn value(&self) -> Option<f64> {
        self.last
    }

    /// Feed a raw angle (any representative mod 2π), returning the
    /// unwrapped continuation.
    pub fn update(&mut self, raw: f64) -> f64 {
        let v = match self.last {
            None => raw,
            Some(prev) => unwrap_angle(prev, raw),
        };
        self.last = Some(v);
        v
    }
}
