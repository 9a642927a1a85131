//! Planar geometry: convex polygons, disc offsets, conical sectors and
//! conservative rasterization onto a uniform grid.
//!
//! All predicates use closed-set semantics with tolerance [`EPS`]: polygons
//! that touch intersect. Disc-vs-polygon tests are the exception, they only
//! report interior overlap so that a robot may rest in contact with an
//! obstacle it is about to push.

mod cone;
mod grid;
mod point;
mod polygon;

use thiserror::Error;

pub use cone::{contains_polygon, ConeSector};
pub use grid::{rasterize, Cell, Grid};
pub use point::{
    angle_diff, normalize_angle, point_segment_distance, segment_segment_distance, segments_intersect, Point, Rect,
    EPS,
};
pub use polygon::{inflate, inflate_covering, intersects, rect_intersects_polygon, ConvexPolygon, ARC_SEGMENTS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("polygon needs at least 3 distinct vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon is not strictly convex")]
    NotConvex,
    #[error("polygon has zero area")]
    ZeroArea,
    #[error("non-finite coordinate ({}, {})", .0.x, .0.y)]
    NonFinite(Point),
    #[error("offset distance must be a finite non-negative number, got {0}")]
    InvalidOffset(f64),
    #[error("grid resolution must be positive, got {0}")]
    InvalidResolution(f64),
    #[error("grid bounds are degenerate")]
    DegenerateBounds,
    #[error("resolution {resolution} exceeds bounds {width} x {height}")]
    ResolutionExceedsBounds { resolution: f64, width: f64, height: f64 },
}
