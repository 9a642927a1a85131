//! Configuration-space grids and transit paths between arbitrary poses.
//!
//! Every known polygon is offset by the robot radius and rasterized
//! conservatively, as is a band of the same width along the map border. A
//! free cell therefore admits the robot disc anywhere in its square.
//!
//! Contact poses (pushing, or the pose reached after a push) lie in occupied
//! cells by construction. They are joined to the grid by a straight
//! connector to the nearest free cell whose swept disc is clear.

use std::collections::BTreeMap;

use super::search::search_cells;
use super::{orient, ComponentKind, Configuration, PathComponent};
use crate::geometry::{Cell, ConvexPolygon, GeometryError, Grid, Point, Rect};
use crate::world::World;

/// Cells searched around a contact pose for a connector, per axis.
const CONNECTOR_REACH: f64 = 1.5;

#[derive(Clone, Debug)]
pub struct CSpace {
    pub grid: Grid,
    polygons: Vec<ConvexPolygon>,
    radius: f64,
    bounds: Rect,
}

impl CSpace {
    pub fn from_polygons(
        bounds: Rect,
        resolution: f64,
        radius: f64,
        polygons: Vec<ConvexPolygon>,
    ) -> Result<Self, GeometryError> {
        let mut grid = Grid::new(bounds, resolution)?;
        mark_border(&mut grid, bounds, radius);
        for p in &polygons {
            grid.stamp_offset(p, radius)?;
        }
        Ok(Self {
            grid,
            polygons,
            radius,
            bounds,
        })
    }

    /// Every known polygon of `w`.
    pub fn of_world(w: &World) -> Result<Self, GeometryError> {
        Self::from_polygons(w.bounds, w.resolution, w.robot_radius, w.polygons().cloned().collect())
    }

    /// Every known polygon of `w` except obstacle `skip`.
    pub fn of_world_except(w: &World, skip: &str) -> Result<Self, GeometryError> {
        Self::from_polygons(
            w.bounds,
            w.resolution,
            w.robot_radius,
            w.polygons_except(skip).cloned().collect(),
        )
    }

    /// A copy with one more polygon.
    pub fn with_polygon(&self, poly: &ConvexPolygon) -> Result<Self, GeometryError> {
        let mut next = self.clone();
        next.grid.stamp_offset(poly, self.radius)?;
        next.polygons.push(poly.clone());
        Ok(next)
    }

    pub fn polygons(&self) -> &[ConvexPolygon] {
        &self.polygons
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Robot disc at `p` is inside the bounds and overlaps no interior.
    pub fn disc_free(&self, p: Point) -> bool {
        disc_in_bounds(self.bounds, self.radius, p) && !self.polygons.iter().any(|q| q.overlaps_disc(p, self.radius))
    }

    /// The disc swept from `a` to `b` overlaps no interior.
    pub fn segment_free(&self, a: Point, b: Point) -> bool {
        disc_in_bounds(self.bounds, self.radius, a)
            && disc_in_bounds(self.bounds, self.radius, b)
            && !self.polygons.iter().any(|q| q.overlaps_capsule(a, b, self.radius))
    }

    /// Grid cell for `p` plus the connector from `p` to that cell's centre
    /// (both endpoints included).
    fn anchor(&self, p: Point) -> Option<(Cell, Vec<Point>)> {
        if !self.disc_free(p) {
            return None;
        }
        let res = self.grid.resolution();
        if let Some(c) = self.grid.cell_at(p).filter(|&c| self.grid.is_free(c)) {
            return Some((c, vec![p, self.grid.cell_center(c)]));
        }
        let reach = CONNECTOR_REACH * self.radius + 2.0 * res;
        let window = Rect::new(p, p).expanded(reach);
        let ((i0, j0), (i1, j1)) = self.grid.cell_span(&window)?;
        let mut candidates: Vec<(f64, usize, Cell)> = Vec::new();
        for j in j0..=j1 {
            for i in i0..=i1 {
                let c = (i, j);
                let d = self.grid.cell_center(c).distance(p);
                if self.grid.is_free(c) && d <= reach {
                    candidates.push((d, self.grid.index(c), c));
                }
            }
        }
        candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        candidates.into_iter().find_map(|(_, _, c)| {
            let centre = self.grid.cell_center(c);
            self.segment_free(p, centre).then(|| (c, subdivide(p, centre, res)))
        })
    }

    /// Transit path between two poses, keeping both poses verbatim as the
    /// first and last waypoints. Steps never exceed √2 · resolution.
    pub fn plan(&self, start: Configuration, goal: Configuration, kind: ComponentKind) -> Option<PathComponent> {
        if start == goal {
            return Some(PathComponent::from_waypoints(kind, vec![start]));
        }
        if start.position == goal.position {
            return Some(PathComponent::from_waypoints(kind, vec![start, goal]));
        }
        let (sc, s_conn) = self.anchor(start.position)?;
        let (gc, g_conn) = self.anchor(goal.position)?;
        let path = search_cells(&self.grid, sc, &[gc]).ok()?.pop().flatten()?;
        Some(self.assemble(start, goal, kind, &s_conn, &path.cells, &g_conn))
    }

    /// Transit paths from `start` to each of `goals` from one search. Keys
    /// are indices into `goals`; unreachable goals are absent.
    pub fn plan_multi(
        &self,
        start: Configuration,
        goals: &[Configuration],
        kind: ComponentKind,
    ) -> BTreeMap<usize, PathComponent> {
        let mut out = BTreeMap::new();
        let Some((sc, s_conn)) = self.anchor(start.position) else {
            return out;
        };
        let mut cells = Vec::new();
        let mut owners = Vec::new();
        let mut conns = Vec::new();
        for (k, g) in goals.iter().enumerate() {
            if let Some((gc, conn)) = self.anchor(g.position) {
                cells.push(gc);
                owners.push(k);
                conns.push(conn);
            }
        }
        if cells.is_empty() {
            return out;
        }
        let Ok(paths) = search_cells(&self.grid, sc, &cells) else {
            return out;
        };
        for ((path, k), conn) in paths.into_iter().zip(owners).zip(conns) {
            if let Some(path) = path {
                out.insert(k, self.assemble(start, goals[k], kind, &s_conn, &path.cells, &conn));
            }
        }
        out
    }

    fn assemble(
        &self,
        start: Configuration,
        goal: Configuration,
        kind: ComponentKind,
        s_conn: &[Point],
        cells: &[Cell],
        g_conn: &[Point],
    ) -> PathComponent {
        let mut pts: Vec<Point> = s_conn.to_vec();
        pts.extend(cells.iter().skip(1).map(|&c| self.grid.cell_center(c)));
        pts.extend(g_conn.iter().rev().skip(1));
        pts.dedup_by(|a, b| a.distance(*b) < 1e-12);
        pts[0] = start.position;
        let n = pts.len();
        if n == 1 {
            pts.push(goal.position);
        } else {
            pts[n - 1] = goal.position;
        }
        PathComponent::from_waypoints(kind, orient(&pts, start.heading, goal.heading))
    }
}

pub(crate) fn disc_in_bounds(bounds: Rect, r: f64, p: Point) -> bool {
    p.x - r >= bounds.min.x - 1e-9
        && p.x + r <= bounds.max.x + 1e-9
        && p.y - r >= bounds.min.y - 1e-9
        && p.y + r <= bounds.max.y + 1e-9
}

/// Occupies every cell containing a point closer than `r` to the border of
/// `bounds`. The grid itself may cover any window.
pub(crate) fn mark_border(grid: &mut Grid, bounds: Rect, r: f64) {
    for j in 0..grid.height() {
        for i in 0..grid.width() {
            let rect = grid.cell_rect((i, j));
            let near = rect.min.x < bounds.min.x + r
                || rect.min.y < bounds.min.y + r
                || rect.max.x > bounds.max.x - r
                || rect.max.y > bounds.max.y - r;
            if near {
                grid.set((i, j), true);
            }
        }
    }
}

/// Points from `a` to `b` inclusive, spaced at most `step` apart.
pub(crate) fn subdivide(a: Point, b: Point, step: f64) -> Vec<Point> {
    let n = ((a.distance(b) / step) - 1e-9).ceil().max(1.0) as usize;
    (0..=n).map(|k| a.lerp(b, k as f64 / n as f64)).collect()
}
