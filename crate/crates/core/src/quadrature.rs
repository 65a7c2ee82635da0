//! Tensor-product quadrature on squares, triangles and convex polygons, plus
//! a graded composite midpoint mesh for integrands that peak at the edges of
//! a long interval.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureRule {
    #[serde(alias = "midpoint")]
    MidpointComposite,
    #[serde(alias = "gauss")]
    GaussTensor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub points_per_axis: usize,
    pub rule: QuadratureRule,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { points_per_axis: 16, rule: QuadratureRule::MidpointComposite }
    }
}

impl QuadratureSpec {
    pub fn new(points_per_axis: usize, rule: QuadratureRule) -> Self {
        QuadratureSpec { points_per_axis, rule }
    }

    pub fn validate(&self) -> Result<()> {
        if self.points_per_axis < 2 {
            return Err(Error::validation(
                "irs.quad_points",
                format!("must be >= 2 (got {})", self.points_per_axis),
            ));
        }
        Ok(())
    }

    /// Nodes and weights on `[0, 1]`; weights sum to 1.
    pub fn unit_rule(&self) -> Vec<(f64, f64)> {
        let n = self.points_per_axis;
        match self.rule {
            QuadratureRule::MidpointComposite => {
                let h = 1.0 / n as f64;
                (0..n).map(|k| ((k as f64 + 0.5) * h, h)).collect()
            }
            QuadratureRule::GaussTensor => gauss_legendre(n)
                .into_iter()
                .map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w))
                .collect(),
        }
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` (Newton on P_n).
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); n];
    let m = n.div_ceil(2);
    for k in 0..m {
        let mut x = (PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[k] = (-x, w);
        out[n - 1 - k] = (x, w);
    }
    out
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

pub type Point2 = [f64; 2];

/// Signed area (positive for counter-clockwise vertex order).
pub fn polygon_area(poly: &[Point2]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let mut a = 0.0;
    for k in 0..n {
        let p = poly[k];
        let q = poly[(k + 1) % n];
        a += p[0] * q[1] - q[0] * p[1];
    }
    0.5 * a
}

/// Sutherland-Hodgman clip of a convex polygon against an axis-aligned box.
pub fn clip_to_rect(poly: &[Point2], min: Point2, max: Point2) -> Vec<Point2> {
    let mut out = poly.to_vec();
    for axis in 0..2 {
        out = clip_half_plane(&out, axis, min[axis], true);
        out = clip_half_plane(&out, axis, max[axis], false);
        if out.is_empty() {
            break;
        }
    }
    out
}

fn clip_half_plane(poly: &[Point2], axis: usize, bound: f64, keep_above: bool) -> Vec<Point2> {
    let inside = |p: &Point2| if keep_above { p[axis] >= bound } else { p[axis] <= bound };
    let mut out = Vec::with_capacity(poly.len() + 2);
    let n = poly.len();
    for k in 0..n {
        let cur = poly[k];
        let prev = poly[(k + n - 1) % n];
        let (ci, pi) = (inside(&cur), inside(&prev));
        if ci != pi {
            let t = (bound - prev[axis]) / (cur[axis] - prev[axis]);
            let mut x = [prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])];
            x[axis] = bound;
            out.push(x);
        }
        if ci {
            out.push(cur);
        }
    }
    out
}

/// Integrates `f` over triangle `abc` via the collapsed square
/// `p = a + s (b - a) + s t (c - b)`, Jacobian `2 |area| s`.
pub fn integrate_triangle<F>(a: Point2, b: Point2, c: Point2, rule: &[(f64, f64)], f: &mut F) -> f64
where
    F: FnMut(Point2) -> f64,
{
    let area2 = ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])).abs();
    if area2 == 0.0 {
        return 0.0;
    }
    let mut sum = 0.0;
    for &(s, ws) in rule {
        let mut inner = 0.0;
        for &(t, wt) in rule {
            let p = [
                a[0] + s * (b[0] - a[0]) + s * t * (c[0] - b[0]),
                a[1] + s * (b[1] - a[1]) + s * t * (c[1] - b[1]),
            ];
            inner += wt * f(p);
        }
        sum += ws * s * inner;
    }
    sum * area2
}

/// Integrates `f` over a convex polygon by fanning triangles from vertex 0.
pub fn integrate_convex_polygon<F>(poly: &[Point2], rule: &[(f64, f64)], mut f: F) -> f64
where
    F: FnMut(Point2) -> f64,
{
    if poly.len() < 3 {
        return 0.0;
    }
    (1..poly.len() - 1)
        .map(|k| integrate_triangle(poly[0], poly[k], poly[k + 1], rule, &mut f))
        .sum()
}

/// Composite midpoint cells on `[a, b]`, clustered geometrically toward both
/// ends: widths grow by a constant factor away from each end, so an integrand
/// that decays like a power of the distance from an edge over `scale` is
/// resolved with a fixed number of cells per decade. The mesh refines
/// uniformly in the mapped coordinate as `cells` grows.
///
/// Returns `(node, weight)` pairs; weights sum to `b - a`.
pub fn graded_midpoint(a: f64, b: f64, cells: usize, scale: f64) -> Vec<(f64, f64)> {
    let len = b - a;
    if len <= 0.0 || cells == 0 {
        return Vec::new();
    }
    let half = len / 2.0;
    let per_side = cells.div_ceil(2);
    let lambda = (half / scale).max(1.0).ln();
    let map = |u: f64| -> f64 {
        if lambda < 1e-12 {
            u * half
        } else {
            half * (lambda * u).exp_m1() / lambda.exp_m1()
        }
    };
    let mut out = Vec::with_capacity(2 * per_side);
    for k in 0..per_side {
        let lo = map(k as f64 / per_side as f64);
        let hi = map((k + 1) as f64 / per_side as f64);
        out.push((a + 0.5 * (lo + hi), hi - lo));
    }
    for k in (0..per_side).rev() {
        let lo = map(k as f64 / per_side as f64);
        let hi = map((k + 1) as f64 / per_side as f64);
        out.push((b - 0.5 * (lo + hi), hi - lo));
    }
    out
}
