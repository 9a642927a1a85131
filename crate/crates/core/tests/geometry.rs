//! Property tests for the geometric primitives against oracles written
//! from scratch here.

use std::f64::consts::PI;

use proptest::prelude::*;
use snamo::geometry::{contains_polygon, inflate, inflate_covering, intersects, rasterize, ConeSector, ConvexPolygon, Point, Rect};
use snamo::world::SensorModel;
use snamo::Configuration;

fn polygon() -> impl Strategy<Value = ConvexPolygon> {
    (0.5..9.5f64, 0.5..9.5f64, 0.1..1.5f64, 3usize..9, 0.0..PI).prop_map(|(x, y, r, n, phase)| {
        ConvexPolygon::regular(Point::new(x, y), r, n, phase).expect("regular polygons are valid")
    })
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// Counter-clockwise half-plane test.
fn inside(poly: &ConvexPolygon, p: Point) -> bool {
    let v = poly.vertices();
    (0..v.len()).all(|i| orient(v[i], v[(i + 1) % v.len()], p) >= -1e-12)
}

fn proper_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Closed convex polygons meet iff a vertex of one lies in the other or two
/// edges cross.
fn meet(a: &ConvexPolygon, b: &ConvexPolygon) -> bool {
    let (va, vb) = (a.vertices(), b.vertices());
    if va.iter().any(|&p| inside(b, p)) || vb.iter().any(|&p| inside(a, p)) {
        return true;
    }
    (0..va.len()).any(|i| (0..vb.len()).any(|j| proper_cross(va[i], va[(i + 1) % va.len()], vb[j], vb[(j + 1) % vb.len()])))
}

/// Interior points: each weight triple picks an edge, a point on it, and a
/// blend towards the centroid.
fn samples(poly: &ConvexPolygon, weights: &[f64]) -> Vec<Point> {
    let v = poly.vertices();
    weights
        .chunks_exact(3)
        .map(|c| {
            let i = (c[0] * v.len() as f64) as usize % v.len();
            let e = v[i].lerp(v[(i + 1) % v.len()], c[2]);
            poly.centroid().lerp(e, c[1])
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn intersects_matches_oracle_and_is_symmetric(a in polygon(), b in polygon()) {
        let expected = meet(&a, &b);
        prop_assert_eq!(intersects(&a, &b), expected);
        prop_assert_eq!(intersects(&b, &a), expected);
    }

    #[test]
    fn inflate_stays_within_the_exact_offset(p in polygon(), d in 0.0..1.0f64) {
        let q = inflate(&p, d).unwrap();
        for v in p.vertices() {
            prop_assert!(inside(&q, *v));
        }
        for v in q.vertices() {
            prop_assert!(p.distance_to_point(*v) <= d + 1e-9);
        }
        prop_assert!(q.area() + 1e-12 >= p.area());
    }

    #[test]
    fn inflate_is_monotone(p in polygon(), d1 in 0.0..1.0f64, extra in 0.0..1.0f64) {
        let small = inflate(&p, d1).unwrap();
        let large = inflate(&p, d1 + extra).unwrap();
        for v in small.vertices() {
            prop_assert!(inside(&large, *v), "{v:?} escapes the larger offset");
        }
    }

    #[test]
    fn covering_offset_contains_every_point_at_distance(p in polygon(), d in 0.01..1.0f64, t in 0.0..1.0f64, k in 0usize..64) {
        let cover = inflate_covering(&p, d).unwrap();
        let v = p.vertices();
        let i = k % v.len();
        let base = v[i].lerp(v[(i + 1) % v.len()], t);
        for m in 0..16 {
            let q = base + Point::from_angle(2.0 * PI * m as f64 / 16.0) * d;
            if p.distance_to_point(q) <= d {
                prop_assert!(inside(&cover, q) || cover.distance_to_point(q) <= 1e-9);
            }
        }
    }

    #[test]
    fn rasterization_is_conservative(p in polygon(), res in 0.05..0.5f64, w in proptest::collection::vec(0.0..1.0f64, 60)) {
        let bounds = Rect::new(Point::new(0.0, 0.0), Point::new(10.0, 10.0));
        let grid = rasterize(std::slice::from_ref(&p), bounds, res).unwrap();
        for q in samples(&p, &w).into_iter().chain(p.vertices().iter().copied()) {
            if let Some(cell) = grid.cell_at(q) {
                prop_assert!(grid.is_occupied(cell), "{q:?} lies in a free cell");
            }
        }
        let half_diag = res * std::f64::consts::SQRT_2 / 2.0;
        for idx in 0..grid.len() {
            let cell = grid.cell_of_index(idx);
            if grid.is_occupied(cell) {
                prop_assert!(p.distance_to_point(grid.cell_center(cell)) <= half_diag + 1e-9);
            }
        }
    }

    #[test]
    fn cone_containment_covers_the_interior(
        p in polygon(),
        x in 0.0..10.0f64,
        y in 0.0..10.0f64,
        heading in -PI..PI,
        half in 0.1..PI,
        range in 0.5..8.0f64,
        w in proptest::collection::vec(0.0..1.0f64, 30),
    ) {
        let cone = ConeSector::new(Point::new(x, y), heading, half, range);
        let pts = samples(&p, &w);
        if contains_polygon(&cone, &p) {
            for q in &pts {
                prop_assert!(cone.contains(*q));
            }
        }
        if pts.iter().any(|q| cone.contains(*q)) {
            prop_assert!(cone.intersects_polygon(&p));
        }
    }

    #[test]
    fn semantic_view_nests_in_geometric_view(
        p in polygon(),
        x in 0.0..10.0f64,
        y in 0.0..10.0f64,
        heading in -PI..PI,
        q in (0.0..10.0f64, 0.0..10.0f64),
    ) {
        let sensor = SensorModel::default();
        let pose = Configuration::at(x, y, heading);
        let (g, s) = (sensor.g_fov(pose), sensor.s_fov(pose));
        let q = Point::new(q.0, q.1);
        if s.contains(q) {
            prop_assert!(g.contains(q));
        }
        if contains_polygon(&s, &p) {
            prop_assert!(contains_polygon(&g, &p));
        }
        if s.intersects_polygon(&p) {
            prop_assert!(g.intersects_polygon(&p));
        }
    }
}
