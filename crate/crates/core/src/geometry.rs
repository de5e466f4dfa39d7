//! Convex planar polygons and the geometric functionals built on them:
//! diameter (rotating calipers), width orthogonal to a diameter, the John
//! ellipse, the chord-length profile along the diameter and section moments.

use crate::error::{Error, Result};
use crate::sturm::ProfileWeight;
use nalgebra::{Matrix2, SMatrix, SVector, Vector2};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

pub type Vec2 = Vector2<f64>;

const CONVEXITY_TOL: f64 = 1e-12;
const DEGENERACY_TOL: f64 = 1e-14;

fn cross(a: &Vec2, b: &Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// An open bounded convex polygon, vertices counter-clockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Vec2>,
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Vec2>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidPolygon(format!("need at least 3 vertices, got {n}")));
        }
        if vertices.iter().any(|v| !v.x.is_finite() || !v.y.is_finite()) {
            return Err(Error::InvalidPolygon("non-finite vertex coordinate".into()));
        }
        for i in 0..n {
            let e0 = vertices[(i + 1) % n] - vertices[i];
            let e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
            let (l0, l1) = (e0.norm(), e1.norm());
            if l0 == 0.0 || l1 == 0.0 {
                return Err(Error::InvalidPolygon(format!("repeated vertex at index {}", (i + 1) % n)));
            }
            if cross(&e0, &e1) / (l0 * l1) <= CONVEXITY_TOL {
                return Err(Error::InvalidPolygon(format!(
                    "vertex {} is not a strictly convex counter-clockwise turn",
                    (i + 1) % n
                )));
            }
        }
        let poly = ConvexPolygon { vertices };
        let area = poly.area();
        let diameter = poly.max_pairwise_distance();
        if area <= DEGENERACY_TOL * diameter * diameter {
            return Err(Error::DegeneratePolygon { area, diameter });
        }
        // a turning sum above 2π means the cycle winds more than once
        let turning: f64 = (0..n)
            .map(|i| {
                let e0 = poly.vertices[(i + 1) % n] - poly.vertices[i];
                let e1 = poly.vertices[(i + 2) % n] - poly.vertices[(i + 1) % n];
                cross(&e0, &e1).atan2(e0.dot(&e1))
            })
            .sum();
        if (turning - 2.0 * PI).abs() > 1e-6 {
            return Err(Error::InvalidPolygon(format!("vertex cycle winds {:.3} turns", turning / (2.0 * PI))));
        }
        Ok(poly)
    }

    /// Convex hull of a point cloud (Andrew's monotone chain), collinear
    /// points dropped.
    pub fn from_hull(points: &[Vec2]) -> Result<Self> {
        let mut pts: Vec<Vec2> = points.to_vec();
        pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        pts.dedup();
        if pts.len() < 3 {
            return Err(Error::InvalidPolygon("hull needs at least 3 distinct points".into()));
        }
        let scale = pts.iter().map(|p| p.norm()).fold(1.0_f64, f64::max);
        let turn = |o: &Vec2, a: &Vec2, b: &Vec2| cross(&(a - o), &(b - o));
        let tol = 1e-12 * scale * scale;
        let mut hull: Vec<Vec2> = Vec::with_capacity(2 * pts.len());
        for p in &pts {
            while hull.len() >= 2 && turn(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= tol {
                hull.pop();
            }
            hull.push(*p);
        }
        let lower_len = hull.len() + 1;
        for p in pts.iter().rev().skip(1) {
            while hull.len() >= lower_len && turn(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= tol {
                hull.pop();
            }
            hull.push(*p);
        }
        hull.pop();
        let cleaned = hull;
        ConvexPolygon::new(cleaned)
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges as `(start, end)` pairs in counter-clockwise order.
    pub fn edges(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        0.5 * self.edges().map(|(a, b)| cross(&a, &b)).sum::<f64>()
    }

    pub fn centroid(&self) -> Vec2 {
        let mut c = Vec2::zeros();
        let mut a2 = 0.0;
        let origin = self.vertices[0];
        for (a, b) in self.edges() {
            let (a, b) = (a - origin, b - origin);
            let w = cross(&a, &b);
            a2 += w;
            c += (a + b) * w;
        }
        origin + c / (3.0 * a2)
    }

    fn max_pairwise_distance(&self) -> f64 {
        let mut best = 0.0_f64;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                best = best.max((a - b).norm());
            }
        }
        best
    }

    /// Applies `p ↦ rotation · (p − origin) · scale`. Orientation is kept for
    /// positive scale.
    pub fn transformed(&self, origin: Vec2, rotation: f64, scale: f64) -> Result<Self> {
        let rot = Matrix2::new(rotation.cos(), -rotation.sin(), rotation.sin(), rotation.cos());
        ConvexPolygon::new(self.vertices.iter().map(|p| rot * (p - origin) * scale).collect())
    }

    /// Scales the y coordinate by `factor`.
    pub fn stretched_y(&self, factor: f64) -> Result<Self> {
        ConvexPolygon::new(self.vertices.iter().map(|p| Vec2::new(p.x, p.y * factor)).collect())
    }

    pub fn translated(&self, offset: Vec2) -> Self {
        ConvexPolygon { vertices: self.vertices.iter().map(|p| p + offset).collect() }
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        ConvexPolygon::new(self.vertices.iter().map(|p| p * factor).collect())
    }

    /// Signed distance to the boundary, positive inside.
    pub fn inner_distance(&self, p: &Vec2) -> f64 {
        self.edges()
            .map(|(a, b)| {
                let e = b - a;
                cross(&e, &(p - a)) / e.norm()
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, p: &Vec2, tol: f64) -> bool {
        self.inner_distance(p) >= -tol
    }

    /// Lowest and highest `y` on the vertical line through `x`, if it meets
    /// the polygon.
    pub fn vertical_section(&self, x: f64) -> Option<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (a, b) in self.edges() {
            let (x0, x1) = if a.x <= b.x { (a.x, b.x) } else { (b.x, a.x) };
            if x < x0 || x > x1 {
                continue;
            }
            let ys: [f64; 2] = if x1 == x0 {
                [a.y, b.y]
            } else {
                let y = a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
                [y, y]
            };
            for y in ys {
                lo = lo.min(y);
                hi = hi.max(y);
            }
        }
        (lo <= hi).then_some((lo, hi))
    }

    pub fn x_range(&self) -> (f64, f64) {
        self.vertices
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.x), hi.max(p.x)))
    }

    pub fn y_range(&self) -> (f64, f64) {
        self.vertices
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.y), hi.max(p.y)))
    }

    pub fn rectangle(width: f64, height: f64) -> Result<Self> {
        ConvexPolygon::new(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(width, 0.0),
            Vec2::new(width, height),
            Vec2::new(0.0, height),
        ])
    }

    /// Regular `n`-gon centred at the origin with circumradius `radius`,
    /// first vertex on the positive x-axis.
    pub fn regular(n: usize, radius: f64) -> Result<Self> {
        ConvexPolygon::new(
            (0..n)
                .map(|i| {
                    let t = 2.0 * PI * i as f64 / n as f64;
                    Vec2::new(radius * t.cos(), radius * t.sin())
                })
                .collect(),
        )
    }
}

/// Diameter of a polygon with the antipodal vertex pair realizing it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiameterInfo {
    pub length: f64,
    pub endpoints: (Vec2, Vec2),
    pub indices: (usize, usize),
    pub direction: Vec2,
}

/// Rotating calipers over antipodal vertex pairs. Ties (within 1e-12
/// relative) go to the lexicographically smallest index pair.
pub fn diameter(poly: &ConvexPolygon) -> DiameterInfo {
    let v = poly.vertices();
    let n = v.len();
    let tri = |a: usize, b: usize, c: usize| cross(&(v[b] - v[a]), &(v[c] - v[a]));
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(3 * n);
    let mut j = 1;
    for i in 0..n {
        let i1 = (i + 1) % n;
        let mut guard = 0;
        while tri(i, i1, (j + 1) % n) > tri(i, i1, j) && guard < n {
            j = (j + 1) % n;
            guard += 1;
        }
        pairs.push((i, j));
        pairs.push((i1, j));
        let here = tri(i, i1, j);
        let next = tri(i, i1, (j + 1) % n);
        if (next - here).abs() <= 1e-12 * here.abs().max(f64::MIN_POSITIVE) {
            pairs.push((i, (j + 1) % n));
            pairs.push((i1, (j + 1) % n));
        }
    }
    let mut best: Option<(f64, (usize, usize))> = None;
    for (a, b) in pairs {
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        let len = (v[a] - v[b]).norm();
        best = match best {
            None => Some((len, key)),
            Some((bl, bk)) => {
                let tie = (len - bl).abs() <= 1e-12 * bl;
                if (tie && key < bk) || (!tie && len > bl) {
                    Some((len, key))
                } else {
                    Some((bl, bk))
                }
            }
        };
    }
    let (length, (a, b)) = best.expect("polygon has at least 3 vertices");
    DiameterInfo { length, endpoints: (v[a], v[b]), indices: (a, b), direction: (v[b] - v[a]) / length }
}

/// Extent of the projection of `poly` onto the direction perpendicular to
/// `dir` (which must be a unit vector).
pub fn width_orthogonal(poly: &ConvexPolygon, dir: &Vec2) -> f64 {
    let normal = Vec2::new(-dir.y, dir.x);
    let (lo, hi) = poly
        .vertices()
        .iter()
        .map(|p| p.dot(&normal))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), t| (lo.min(t), hi.max(t)));
    hi - lo
}

/// Ellipse `{center + B u : |u| ≤ 1}` with `B` symmetric positive definite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ellipse {
    pub center: [f64; 2],
    /// `(a1, a2)` with `a1 ≥ a2 > 0`.
    pub semiaxes: (f64, f64),
    /// Direction of the `a1` axis, radians.
    pub angle: f64,
}

impl Ellipse {
    pub fn matrix(&self) -> Matrix2<f64> {
        let (c, s) = (self.angle.cos(), self.angle.sin());
        let r = Matrix2::new(c, -s, s, c);
        r * Matrix2::new(self.semiaxes.0, 0.0, 0.0, self.semiaxes.1) * r.transpose()
    }

    pub fn center(&self) -> Vec2 {
        Vec2::new(self.center[0], self.center[1])
    }

    /// Support function `max_{x ∈ E} x·n`.
    pub fn support(&self, n: &Vec2) -> f64 {
        self.center().dot(n) + (self.matrix() * n).norm()
    }

    /// Gauge `|B^{-1}(p − c)|`; at most 1 inside the ellipse.
    pub fn gauge(&self, p: &Vec2) -> f64 {
        let inv = self.matrix().try_inverse().expect("ellipse matrix is positive definite");
        (inv * (p - self.center())).norm()
    }

    pub fn area(&self) -> f64 {
        PI * self.semiaxes.0 * self.semiaxes.1
    }

    pub fn boundary_point(&self, t: f64) -> Vec2 {
        self.center() + self.matrix() * Vec2::new(t.cos(), t.sin())
    }
}

type V5 = SVector<f64, 5>;
type M5 = SMatrix<f64, 5, 5>;

struct EllipseBarrier {
    normals: Vec<Vec2>,
    offsets: Vec<f64>,
}

impl EllipseBarrier {
    fn feasible(&self, z: &V5) -> bool {
        let det = z[0] * z[2] - z[1] * z[1];
        if !(z[0] > 0.0 && det > 0.0) {
            return false;
        }
        self.normals.iter().zip(&self.offsets).all(|(a, &b)| {
            let s = b - a.x * z[3] - a.y * z[4];
            let v = Vec2::new(z[0] * a.x + z[1] * a.y, z[1] * a.x + z[2] * a.y);
            s > 0.0 && s * s - v.norm_squared() > 0.0
        })
    }

    fn value(&self, z: &V5, t: f64) -> f64 {
        let det = z[0] * z[2] - z[1] * z[1];
        let mut f = -t * det.ln();
        for (a, &b) in self.normals.iter().zip(&self.offsets) {
            let s = b - a.x * z[3] - a.y * z[4];
            let v = Vec2::new(z[0] * a.x + z[1] * a.y, z[1] * a.x + z[2] * a.y);
            let r = v.norm();
            f -= ((s - r) * (s + r)).ln();
        }
        f
    }

    fn gradient_hessian(&self, z: &V5, t: f64) -> (V5, M5) {
        let det = z[0] * z[2] - z[1] * z[1];
        let ddet = V5::new(z[2], -2.0 * z[1], z[0], 0.0, 0.0);
        let mut hdet = M5::zeros();
        hdet[(0, 2)] = 1.0;
        hdet[(2, 0)] = 1.0;
        hdet[(1, 1)] = -2.0;
        let mut g = -t * ddet / det;
        let mut h = t * (ddet * ddet.transpose() / (det * det) - hdet / det);
        for (a, &b) in self.normals.iter().zip(&self.offsets) {
            let s = b - a.x * z[3] - a.y * z[4];
            let v = Vec2::new(z[0] * a.x + z[1] * a.y, z[1] * a.x + z[2] * a.y);
            let ds = V5::new(0.0, 0.0, 0.0, -a.x, -a.y);
            let dv1 = V5::new(a.x, a.y, 0.0, 0.0, 0.0);
            let dv2 = V5::new(0.0, a.x, a.y, 0.0, 0.0);
            let r = v.norm();
            let phi = (s - r) * (s + r);
            let dphi = 2.0 * (s * ds - v.x * dv1 - v.y * dv2);
            let hphi = 2.0 * (ds * ds.transpose() - dv1 * dv1.transpose() - dv2 * dv2.transpose());
            g -= dphi / phi;
            h += dphi * dphi.transpose() / (phi * phi) - hphi / phi;
        }
        (g, h)
    }
}

/// Duality-gap target for the log-det barrier method.
pub const JOHN_GAP_TOL: f64 = 1e-10;

/// Maximal-area inscribed ellipse, by a damped Newton barrier method on
/// `max log det B  s.t.  |B a_i| + a_i·c ≤ b_i` (one cone per edge).
pub fn john_ellipse(poly: &ConvexPolygon) -> Result<Ellipse> {
    let origin = poly.centroid();
    let scale = diameter(poly).length;
    let local: Vec<Vec2> = poly.vertices().iter().map(|p| (p - origin) / scale).collect();
    let n = local.len();
    let mut normals = Vec::with_capacity(n);
    let mut offsets = Vec::with_capacity(n);
    for i in 0..n {
        let e = local[(i + 1) % n] - local[i];
        let a = Vec2::new(e.y, -e.x) / e.norm();
        offsets.push(a.dot(&local[i]));
        normals.push(a);
    }
    let r0 = 0.5 * offsets.iter().cloned().fold(f64::INFINITY, f64::min);
    let barrier = EllipseBarrier { normals, offsets };
    let mut z = V5::new(r0, 0.0, r0, 0.0, 0.0);
    let nu = 2.0 * n as f64;
    let mut t = 1.0;
    loop {
        let mut decrement = f64::INFINITY;
        for _ in 0..100 {
            let (g, h) = barrier.gradient_hessian(&z, t);
            let step = match h.cholesky() {
                Some(ch) => -ch.solve(&g),
                None => -g,
            };
            decrement = -g.dot(&step);
            if decrement * 0.5 <= 1e-10 {
                break;
            }
            let f0 = barrier.value(&z, t);
            let mut alpha = 1.0;
            while alpha > 1e-20 {
                let trial = z + alpha * step;
                if barrier.feasible(&trial) && barrier.value(&trial, t) <= f0 - 0.25 * alpha * decrement {
                    break;
                }
                alpha *= 0.5;
            }
            if alpha <= 1e-20 {
                // no representable decrease left: the barrier value is at its rounding floor
                decrement = 0.0;
                break;
            }
            z += alpha * step;
        }
        // within the quadratic region the objective is at most λ²/t from the
        // centre, so the gap bound is (ν + λ²)/t
        if !(decrement < 0.25) {
            return Err(Error::EllipseNotConverged { gap: (nu + decrement) / t });
        }
        if (nu + decrement) / t < JOHN_GAP_TOL {
            break;
        }
        t *= 10.0;
    }
    let b = Matrix2::new(z[0], z[1], z[1], z[2]);
    let eig = b.symmetric_eigen();
    let (i_major, i_minor) = if eig.eigenvalues[0] >= eig.eigenvalues[1] { (0, 1) } else { (1, 0) };
    let major = eig.eigenvectors.column(i_major);
    let center = origin + Vec2::new(z[3], z[4]) * scale;
    Ok(Ellipse {
        center: [center.x, center.y],
        semiaxes: (eig.eigenvalues[i_major] * scale, eig.eigenvalues[i_minor] * scale),
        angle: major[1].atan2(major[0]),
    })
}

/// Containment certificate for a John ellipse: the largest constraint
/// violation of `E ⊆ poly` (support-function form) and of
/// `poly ⊆ c + 2(E − c)` (gauge of the vertices), both ≤ 0 when valid.
pub fn john_certificate(poly: &ConvexPolygon, e: &Ellipse) -> (f64, f64) {
    let inner = poly
        .edges()
        .map(|(a, b)| {
            let d = b - a;
            let normal = Vec2::new(d.y, -d.x) / d.norm();
            e.support(&normal) - normal.dot(&a)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let outer = poly.vertices().iter().map(|p| e.gauge(p) - 2.0).fold(f64::NEG_INFINITY, f64::max);
    (inner, outer)
}

/// Diameter, width orthogonal to the diameter and John semiaxes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Flatness {
    pub diameter: f64,
    pub width: f64,
    pub a1: f64,
    pub a2: f64,
}

impl Flatness {
    /// `a2 ≤ w ≤ 2·a2` with `a2` the second John semiaxis.
    pub fn semiaxis_sandwich_holds(&self, tol: f64) -> bool {
        self.a2 <= self.width + tol && self.width <= 2.0 * self.a2 + tol
    }

    /// `2·a2 ≤ w ≤ 4·a2`, i.e. the same sandwich with the full second axis
    /// length `2·a2` in place of the semiaxis.
    pub fn axis_sandwich_holds(&self, tol: f64) -> bool {
        2.0 * self.a2 <= self.width + tol && self.width <= 4.0 * self.a2 + tol
    }
}

pub fn flatness(poly: &ConvexPolygon) -> Result<Flatness> {
    let d = diameter(poly);
    let e = john_ellipse(poly)?;
    Ok(Flatness { diameter: d.length, width: width_orthogonal(poly, &d.direction), a1: e.semiaxes.0, a2: e.semiaxes.1 })
}

/// Rigid motion taking the diameter onto the positive x-axis with its first
/// endpoint at the origin; with `unit_diameter` the result is also scaled to
/// `D = 1`.
pub fn align_to_diameter(poly: &ConvexPolygon, unit_diameter: bool) -> Result<ConvexPolygon> {
    let d = diameter(poly);
    let rotation = -d.direction.y.atan2(d.direction.x);
    let scale = if unit_diameter { 1.0 / d.length } else { 1.0 };
    poly.transformed(d.endpoints.0, rotation, scale)
}

/// Chord-length profile `x ↦ |S_x ∩ Ω|` along the diameter, after
/// normalizing the diameter to `[0, 1] × {0}`.
pub fn profile(poly: &ConvexPolygon) -> Result<ProfileWeight> {
    let aligned = align_to_diameter(poly, true)?;
    let mut xs: Vec<f64> = aligned.vertices().iter().map(|p| p.x.clamp(0.0, 1.0)).collect();
    xs.push(0.0);
    xs.push(1.0);
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() <= 1e-14);
    if let Some(last) = xs.last_mut() {
        *last = 1.0;
    }
    xs[0] = 0.0;
    let q: Vec<f64> = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            if i == 0 || i == xs.len() - 1 {
                0.0
            } else {
                aligned.vertical_section(x).map_or(0.0, |(lo, hi)| (hi - lo).max(0.0))
            }
        })
        .collect();
    ProfileWeight::new(xs, q, 2)
}

/// Isosceles triangle with aperture `alpha` and equal sides `l`, base on the
/// x-axis centred at the origin.
pub fn make_triangle(alpha: f64, l: f64) -> Result<ConvexPolygon> {
    if !(alpha > 0.0 && alpha < PI) {
        return Err(Error::Domain(format!("aperture must lie in (0, pi), got {alpha}")));
    }
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::Domain(format!("side length must be positive, got {l}")));
    }
    let (s, c) = ((0.5 * alpha).sin(), (0.5 * alpha).cos());
    ConvexPolygon::new(vec![Vec2::new(-l * s, 0.0), Vec2::new(l * s, 0.0), Vec2::new(0.0, l * c)])
}

/// Centre and second moment of a vertical section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionMoment {
    /// Mean of `x2` over the section.
    pub c: f64,
    /// `∫ (x2 − c)² dx2` over the section.
    pub m2: f64,
    /// Section length `p(x1)`.
    pub length: f64,
}

pub fn section_moment(poly: &ConvexPolygon, x1: f64) -> Result<SectionMoment> {
    let (lo, hi) = poly.x_range();
    if !(x1 > lo && x1 < hi) {
        return Err(Error::Domain(format!("x1 = {x1} is outside the open projection ({lo}, {hi})")));
    }
    let (ylo, yhi) = poly.vertical_section(x1).ok_or_else(|| Error::Domain(format!("no section at x1 = {x1}")))?;
    let c = 0.5 * (ylo + yhi);
    let m2 = ((yhi - c).powi(3) - (ylo - c).powi(3)) / 3.0;
    Ok(SectionMoment { c, m2, length: yhi - ylo })
}

/// Isosceles trapezoid symmetric about `x = 1/2`: base `[0, 1] × {0}`, top
/// `[inset, 1 − inset] × {height}`. The base is the strict diameter when
/// `height² < 2·inset − inset²`.
pub fn symmetric_trapezoid(inset: f64, height: f64) -> Result<ConvexPolygon> {
    ConvexPolygon::new(vec![
        Vec2::new(0.0, 0.0),
        Vec2::new(1.0, 0.0),
        Vec2::new(1.0 - inset, height),
        Vec2::new(inset, height),
    ])
}

/// Symmetric lens: a circular cap of height `half_thickness` over the chord
/// `[0, 1] × {0}` reflected across the chord, `n` vertices in total.
pub fn lens(n: usize, half_thickness: f64) -> Result<ConvexPolygon> {
    if n < 4 || n % 2 == 1 || !(half_thickness > 0.0 && half_thickness <= 0.5) {
        return Err(Error::Domain(format!("lens needs even n >= 4 and half thickness in (0, 1/2], got {n}, {half_thickness}")));
    }
    let h = half_thickness;
    let radius = (0.25 + h * h) / (2.0 * h);
    let cy = h - radius;
    let half_angle = (0.5 / radius).asin();
    let m = n / 2;
    let mut vertices = Vec::with_capacity(n);
    // lower arc left to right, then upper arc right to left
    for i in 0..m {
        let t = -half_angle + 2.0 * half_angle * i as f64 / m as f64;
        vertices.push(Vec2::new(0.5 + radius * t.sin(), -(cy + radius * t.cos())));
    }
    for i in 0..m {
        let t = half_angle - 2.0 * half_angle * i as f64 / m as f64;
        vertices.push(Vec2::new(0.5 + radius * t.sin(), cy + radius * t.cos()));
    }
    vertices[0] = Vec2::new(0.0, 0.0);
    vertices[m] = Vec2::new(1.0, 0.0);
    ConvexPolygon::new(vertices)
}

/// Convex hull of `n_points` uniform samples in `[0, 1] × [0, aspect]`.
pub fn random_convex_polygon<R: Rng>(rng: &mut R, n_points: usize, aspect: f64) -> Result<ConvexPolygon> {
    for _ in 0..64 {
        let pts: Vec<Vec2> =
            (0..n_points.max(3)).map(|_| Vec2::new(rng.gen::<f64>(), aspect * rng.gen::<f64>())).collect();
        if let Ok(p) = ConvexPolygon::from_hull(&pts) {
            return Ok(p);
        }
    }
    Err(Error::InvalidPolygon("could not sample a non-degenerate hull".into()))
}

/// Largest distance between a vertex reflected across the perpendicular
/// bisector of the diameter and its nearest vertex, relative to `D`.
pub fn bisector_asymmetry(poly: &ConvexPolygon) -> f64 {
    let d = diameter(poly);
    let mid = 0.5 * (d.endpoints.0 + d.endpoints.1);
    let u = d.direction;
    poly.vertices()
        .iter()
        .map(|p| {
            let r = p - 2.0 * (p - mid).dot(&u) * u;
            poly.vertices().iter().map(|q| (q - r).norm()).fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
        / d.length
}

/// Parses the polygon file format: either a JSON array of `[x, y]` pairs or
/// plain text with one `x y` vertex per line and `#` comments.
pub fn parse_polygon(text: &str) -> Result<ConvexPolygon> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        let pairs: Vec<[f64; 2]> = serde_json::from_str(trimmed)?;
        return ConvexPolygon::new(pairs.iter().map(|p| Vec2::new(p[0], p[1])).collect());
    }
    let mut vertices = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse { line: i + 1, message: format!("expected 2 fields, found {}", fields.len()) });
        }
        let parse = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse { line: i + 1, message: e.to_string() });
        vertices.push(Vec2::new(parse(fields[0])?, parse(fields[1])?));
    }
    ConvexPolygon::new(vertices)
}

pub fn read_polygon(path: impl AsRef<Path>) -> Result<ConvexPolygon> {
    parse_polygon(&std::fs::read_to_string(path)?)
}

/// Plain-text polygon with 17 significant digits per coordinate.
pub fn format_polygon(poly: &ConvexPolygon) -> String {
    let mut out = String::new();
    for v in poly.vertices() {
        let _ = writeln!(out, "{:.16e} {:.16e}", v.x, v.y);
    }
    out
}

pub fn polygon_to_json(poly: &ConvexPolygon) -> String {
    let pairs: Vec<[f64; 2]> = poly.vertices().iter().map(|v| [v.x, v.y]).collect();
    serde_json::to_string(&pairs).expect("finite coordinates serialize")
}
