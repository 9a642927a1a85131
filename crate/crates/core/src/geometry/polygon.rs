use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::point::{point_segment_distance, segments_intersect, Point, Rect, EPS};
use super::GeometryError;

/// Arc segments used per polygon corner when offsetting by a disc.
pub const ARC_SEGMENTS: usize = 16;

/// A strictly convex polygon with counter-clockwise vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl TryFrom<Vec<Point>> for ConvexPolygon {
    type Error = GeometryError;
    fn try_from(value: Vec<Point>) -> Result<Self, Self::Error> {
        ConvexPolygon::new(value)
    }
}

impl From<ConvexPolygon> for Vec<Point> {
    fn from(value: ConvexPolygon) -> Self {
        value.vertices
    }
}

impl ConvexPolygon {
    /// Validates and normalizes a vertex list: drops duplicate and collinear
    /// vertices, reorients to counter-clockwise, then requires strict convexity.
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite(*p));
        }
        let mut pts: Vec<Point> = Vec::with_capacity(vertices.len());
        for p in vertices {
            if pts.last().is_none_or(|q: &Point| q.distance(p) > EPS) {
                pts.push(p);
            }
        }
        while pts.len() > 1 && pts[0].distance(pts[pts.len() - 1]) <= EPS {
            pts.pop();
        }
        if pts.len() < 3 {
            return Err(GeometryError::TooFewVertices(pts.len()));
        }
        if signed_area(&pts) < 0.0 {
            pts.reverse();
        }
        // Drop collinear vertices until stable.
        loop {
            let n = pts.len();
            if n < 3 {
                return Err(GeometryError::TooFewVertices(n));
            }
            let drop = (0..n).find(|&i| {
                let prev = pts[(i + n - 1) % n];
                let cur = pts[i];
                let next = pts[(i + 1) % n];
                let e1 = cur - prev;
                let e2 = next - cur;
                e1.cross(e2).abs() <= 1e-12 * e1.norm() * e2.norm() && e1.dot(e2) > 0.0
            });
            match drop {
                Some(i) => {
                    pts.remove(i);
                }
                None => break,
            }
        }
        let n = pts.len();
        for i in 0..n {
            let e1 = pts[(i + 1) % n] - pts[i];
            let e2 = pts[(i + 2) % n] - pts[(i + 1) % n];
            if e1.cross(e2) <= 0.0 {
                return Err(GeometryError::NotConvex);
            }
        }
        if signed_area(&pts) <= EPS * EPS {
            return Err(GeometryError::ZeroArea);
        }
        Ok(Self { vertices: pts })
    }

    /// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self, GeometryError> {
        Self::new(vec![
            Point::new(x0, y0),
            Point::new(x1, y0),
            Point::new(x1, y1),
            Point::new(x0, y1),
        ])
    }

    /// Regular polygon with `n` sides, first vertex at angle `phase`.
    pub fn regular(center: Point, circumradius: f64, n: usize, phase: f64) -> Result<Self, GeometryError> {
        Self::new(
            (0..n)
                .map(|k| center + Point::from_angle(phase + 2.0 * PI * k as f64 / n as f64) * circumradius)
                .collect(),
        )
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edge `i` as `(start, end)`.
    pub fn edge(&self, i: usize) -> (Point, Point) {
        let n = self.vertices.len();
        (self.vertices[i % n], self.vertices[(i + 1) % n])
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        (0..self.len()).map(move |i| self.edge(i))
    }

    /// Unit outward normal of edge `i`.
    pub fn outward_normal(&self, i: usize) -> Point {
        let (a, b) = self.edge(i);
        let d = b - a;
        Point::new(d.y, -d.x).normalized()
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.distance(b)).sum()
    }

    pub fn centroid(&self) -> Point {
        let mut cx = 0.0;
        let mut cy = 0.0;
        let mut a = 0.0;
        for (p, q) in self.edges() {
            let c = p.cross(q);
            a += c;
            cx += (p.x + q.x) * c;
            cy += (p.y + q.y) * c;
        }
        Point::new(cx / (3.0 * a), cy / (3.0 * a))
    }

    pub fn bounding_box(&self) -> Rect {
        let mut r = Rect::new(self.vertices[0], self.vertices[0]);
        for v in &self.vertices[1..] {
            r.min.x = r.min.x.min(v.x);
            r.min.y = r.min.y.min(v.y);
            r.max.x = r.max.x.max(v.x);
            r.max.y = r.max.y.max(v.y);
        }
        r
    }

    pub fn translated(&self, offset: Point) -> ConvexPolygon {
        ConvexPolygon {
            vertices: self.vertices.iter().map(|&v| v + offset).collect(),
        }
    }

    /// Closed containment with tolerance [`EPS`].
    pub fn contains_point(&self, p: Point) -> bool {
        self.edges().all(|(a, b)| (b - a).cross(p - a) >= -EPS * (b - a).norm())
    }

    /// Euclidean distance from `p` to the closed polygon (0 inside).
    pub fn distance_to_point(&self, p: Point) -> f64 {
        if self.contains_point(p) {
            return 0.0;
        }
        self.edges()
            .map(|(a, b)| point_segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Distance from the closed segment `[p, q]` to the closed polygon.
    pub fn distance_to_segment(&self, p: Point, q: Point) -> f64 {
        if self.contains_point(p) || self.contains_point(q) {
            return 0.0;
        }
        let mut best = f64::INFINITY;
        for (a, b) in self.edges() {
            if segments_intersect(p, q, a, b) {
                return 0.0;
            }
            best = best.min(point_segment_distance(a, p, q));
        }
        best.min(self.distance_to_point(p)).min(self.distance_to_point(q))
    }

    /// Minimum distance between two polygons (0 when they intersect).
    pub fn distance_to_polygon(&self, other: &ConvexPolygon) -> f64 {
        if intersects(self, other) {
            return 0.0;
        }
        self.edges()
            .map(|(a, b)| other.distance_to_segment(a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// True if a disc of `radius` at `center` overlaps the polygon interior.
    /// Boundary contact is allowed.
    pub fn overlaps_disc(&self, center: Point, radius: f64) -> bool {
        self.distance_to_point(center) < radius - EPS
    }

    /// True if a disc of `radius` swept along `[from, to]` overlaps the polygon
    /// interior.
    pub fn overlaps_capsule(&self, from: Point, to: Point, radius: f64) -> bool {
        self.distance_to_segment(from, to) < radius - EPS
    }

    fn projection(&self, axis: Point) -> (f64, f64) {
        self.vertices.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            let d = v.dot(axis);
            (lo.min(d), hi.max(d))
        })
    }

    /// Minkowski sum with a disc of radius `delta`; see [`inflate`].
    pub fn inflate(&self, delta: f64) -> Result<ConvexPolygon, GeometryError> {
        inflate(self, delta)
    }
}

fn signed_area(pts: &[Point]) -> f64 {
    let n = pts.len();
    (0..n).map(|i| pts[i].cross(pts[(i + 1) % n])).sum::<f64>() / 2.0
}

/// Minkowski sum of `poly` with a disc of radius `delta`.
///
/// Each corner arc is replaced by [`ARC_SEGMENTS`] chords whose endpoints lie
/// on the exact arc, so the result is contained in the exact offset and
/// deviates from it by at most `delta * (1 - cos(π / 32))`.
pub fn inflate(poly: &ConvexPolygon, delta: f64) -> Result<ConvexPolygon, GeometryError> {
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(GeometryError::InvalidOffset(delta));
    }
    if delta == 0.0 {
        return Ok(poly.clone());
    }
    let n = poly.len();
    let mut out = Vec::with_capacity(n * (ARC_SEGMENTS + 1));
    for i in 0..n {
        let v = poly.vertices[i];
        let a0 = poly.outward_normal((i + n - 1) % n).angle();
        let mut a1 = poly.outward_normal(i).angle();
        while a1 < a0 {
            a1 += 2.0 * PI;
        }
        let step = (a1 - a0) / ARC_SEGMENTS as f64;
        for k in 0..=ARC_SEGMENTS {
            out.push(v + Point::from_angle(a0 + k as f64 * step) * delta);
        }
    }
    ConvexPolygon::new(out)
}

/// Like [`inflate`], but enlarged just enough that the result contains the
/// exact offset region. Used wherever a conservative footprint is required.
pub fn inflate_covering(poly: &ConvexPolygon, delta: f64) -> Result<ConvexPolygon, GeometryError> {
    inflate(poly, delta / (PI / (2.0 * ARC_SEGMENTS as f64)).cos())
}

/// Closed-set intersection test via separating axes: touching boundaries
/// count as intersecting.
pub fn intersects(a: &ConvexPolygon, b: &ConvexPolygon) -> bool {
    for poly in [a, b] {
        for i in 0..poly.len() {
            let axis = poly.outward_normal(i);
            let (alo, ahi) = a.projection(axis);
            let (blo, bhi) = b.projection(axis);
            if ahi < blo - EPS || bhi < alo - EPS {
                return false;
            }
        }
    }
    true
}

/// Closed intersection of an axis-aligned rectangle with a polygon.
pub fn rect_intersects_polygon(rect: &Rect, poly: &ConvexPolygon) -> bool {
    let bb = poly.bounding_box();
    if !rect.overlaps(&bb) {
        return false;
    }
    let corners = [
        rect.min,
        Point::new(rect.max.x, rect.min.y),
        rect.max,
        Point::new(rect.min.x, rect.max.y),
    ];
    for i in 0..poly.len() {
        let axis = poly.outward_normal(i);
        let (plo, phi) = poly.projection(axis);
        let (rlo, rhi) = corners.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| {
            let d = c.dot(axis);
            (lo.min(d), hi.max(d))
        });
        if phi < rlo - EPS || rhi < plo - EPS {
            return false;
        }
    }
    true
}
