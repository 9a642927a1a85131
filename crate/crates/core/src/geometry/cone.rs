use serde::{Deserialize, Serialize};

use super::point::{angle_diff, segments_intersect, Point, EPS};
use super::polygon::ConvexPolygon;

/// A circular sector: every point within `range` of `apex` whose bearing
/// deviates from `heading` by at most `half_angle`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeSector {
    pub apex: Point,
    pub heading: f64,
    pub half_angle: f64,
    pub range: f64,
}

impl ConeSector {
    pub fn new(apex: Point, heading: f64, half_angle: f64, range: f64) -> Self {
        Self {
            apex,
            heading,
            half_angle,
            range,
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        let d = p - self.apex;
        let dist = d.norm();
        if dist > self.range + EPS {
            return false;
        }
        if dist <= EPS {
            return true;
        }
        // Angular slack equivalent to EPS of arc length.
        angle_diff(d.angle(), self.heading) <= self.half_angle + EPS / dist.max(EPS)
    }

    /// Endpoints of the two bounding radii.
    fn rim_points(&self) -> [Point; 2] {
        [
            self.apex + Point::from_angle(self.heading + self.half_angle) * self.range,
            self.apex + Point::from_angle(self.heading - self.half_angle) * self.range,
        ]
    }

    /// True iff the closed sector and the closed polygon share a point.
    pub fn intersects_polygon(&self, poly: &ConvexPolygon) -> bool {
        if poly.vertices().iter().any(|&v| self.contains(v)) || poly.contains_point(self.apex) {
            return true;
        }
        let rims = self.rim_points();
        for (a, b) in poly.edges() {
            if rims.iter().any(|&r| segments_intersect(self.apex, r, a, b)) {
                return true;
            }
            if self.arc_crosses_segment(a, b) {
                return true;
            }
        }
        false
    }

    fn arc_crosses_segment(&self, a: Point, b: Point) -> bool {
        // Solve |a + t(b - a) - apex| = range for t in [0, 1].
        let d = b - a;
        let f = a - self.apex;
        let qa = d.dot(d);
        let qb = 2.0 * f.dot(d);
        let qc = f.dot(f) - self.range * self.range;
        let disc = qb * qb - 4.0 * qa * qc;
        if qa == 0.0 || disc < 0.0 {
            return false;
        }
        let sq = disc.sqrt();
        [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)]
            .into_iter()
            .filter(|t| (-1e-12..=1.0 + 1e-12).contains(t))
            .any(|t| self.contains(a + d * t))
    }
}

/// True iff every vertex of `poly` lies inside `cone`.
pub fn contains_polygon(cone: &ConeSector, poly: &ConvexPolygon) -> bool {
    poly.vertices().iter().all(|&v| cone.contains(v))
}
