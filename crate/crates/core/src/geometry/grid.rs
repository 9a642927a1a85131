use super::point::{Point, Rect};
use super::polygon::{inflate_covering, rect_intersects_polygon, ConvexPolygon, ARC_SEGMENTS};
use super::GeometryError;

/// Integer cell coordinates `(i, j)` = (column, row).
pub type Cell = (usize, usize);

/// Uniform occupancy grid. Cell `(i, j)` covers the square
/// `[origin + (i, j)·res, origin + (i + 1, j + 1)·res)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    resolution: f64,
    width: usize,
    height: usize,
    origin: Point,
    cells: Vec<bool>,
}

impl Grid {
    /// An all-free grid covering `bounds`.
    pub fn new(bounds: Rect, resolution: f64) -> Result<Self, GeometryError> {
        if !(resolution > 0.0) || !resolution.is_finite() {
            return Err(GeometryError::InvalidResolution(resolution));
        }
        if !(bounds.width() > 0.0 && bounds.height() > 0.0) {
            return Err(GeometryError::DegenerateBounds);
        }
        if resolution > bounds.width() || resolution > bounds.height() {
            return Err(GeometryError::ResolutionExceedsBounds {
                resolution,
                width: bounds.width(),
                height: bounds.height(),
            });
        }
        let width = (bounds.width() / resolution - 1e-9).ceil() as usize;
        let height = (bounds.height() / resolution - 1e-9).ceil() as usize;
        Ok(Self {
            resolution,
            width,
            height,
            origin: bounds.min,
            cells: vec![false; width * height],
        })
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn index(&self, (i, j): Cell) -> usize {
        j * self.width + i
    }

    pub fn cell_of_index(&self, idx: usize) -> Cell {
        (idx % self.width, idx / self.width)
    }

    pub fn in_bounds(&self, i: isize, j: isize) -> bool {
        i >= 0 && j >= 0 && (i as usize) < self.width && (j as usize) < self.height
    }

    pub fn is_occupied(&self, cell: Cell) -> bool {
        self.cells[self.index(cell)]
    }

    pub fn is_free(&self, cell: Cell) -> bool {
        !self.is_occupied(cell)
    }

    pub fn set(&mut self, cell: Cell, occupied: bool) {
        let idx = self.index(cell);
        self.cells[idx] = occupied;
    }

    pub fn occupied_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    /// Cell containing `p`, if inside the grid.
    pub fn cell_at(&self, p: Point) -> Option<Cell> {
        let fi = ((p.x - self.origin.x) / self.resolution).floor();
        let fj = ((p.y - self.origin.y) / self.resolution).floor();
        (fi >= 0.0 && fj >= 0.0 && (fi as usize) < self.width && (fj as usize) < self.height)
            .then_some((fi as usize, fj as usize))
    }

    pub fn cell_center(&self, (i, j): Cell) -> Point {
        Point::new(
            self.origin.x + (i as f64 + 0.5) * self.resolution,
            self.origin.y + (j as f64 + 0.5) * self.resolution,
        )
    }

    pub fn cell_rect(&self, (i, j): Cell) -> Rect {
        let min = Point::new(
            self.origin.x + i as f64 * self.resolution,
            self.origin.y + j as f64 * self.resolution,
        );
        Rect::new(min, Point::new(min.x + self.resolution, min.y + self.resolution))
    }

    /// Range of cells whose squares may touch `rect`, clamped to the grid.
    pub fn cell_span(&self, rect: &Rect) -> Option<(Cell, Cell)> {
        let lo_i = ((rect.min.x - self.origin.x) / self.resolution).floor() as isize - 1;
        let lo_j = ((rect.min.y - self.origin.y) / self.resolution).floor() as isize - 1;
        let hi_i = ((rect.max.x - self.origin.x) / self.resolution).floor() as isize + 1;
        let hi_j = ((rect.max.y - self.origin.y) / self.resolution).floor() as isize + 1;
        let lo_i = lo_i.max(0);
        let lo_j = lo_j.max(0);
        let hi_i = hi_i.min(self.width as isize - 1);
        let hi_j = hi_j.min(self.height as isize - 1);
        (lo_i <= hi_i && lo_j <= hi_j).then_some(((lo_i as usize, lo_j as usize), (hi_i as usize, hi_j as usize)))
    }

    /// Marks every cell whose closed square intersects `poly`.
    pub fn stamp(&mut self, poly: &ConvexPolygon) {
        let Some(((i0, j0), (i1, j1))) = self.cell_span(&poly.bounding_box()) else {
            return;
        };
        for j in j0..=j1 {
            for i in i0..=i1 {
                let idx = j * self.width + i;
                if !self.cells[idx] && rect_intersects_polygon(&self.cell_rect((i, j)), poly) {
                    self.cells[idx] = true;
                }
            }
        }
    }

    /// Marks every cell whose closed square intersects
    /// `inflate_covering(poly, delta)`. Cells far inside or far outside the
    /// offset band are decided by centre distance alone.
    pub fn stamp_offset(&mut self, poly: &ConvexPolygon, delta: f64) -> Result<(), GeometryError> {
        let cover = inflate_covering(poly, delta)?;
        let outer = delta / (std::f64::consts::PI / (2.0 * ARC_SEGMENTS as f64)).cos();
        let half_diag = self.resolution * std::f64::consts::SQRT_2 / 2.0;
        let Some(((i0, j0), (i1, j1))) = self.cell_span(&cover.bounding_box()) else {
            return Ok(());
        };
        for j in j0..=j1 {
            for i in i0..=i1 {
                let idx = j * self.width + i;
                if self.cells[idx] {
                    continue;
                }
                let d = poly.distance_to_point(self.cell_center((i, j)));
                let hit = if d + half_diag < delta - 1e-7 {
                    true
                } else if d - half_diag > outer + 1e-7 {
                    false
                } else {
                    rect_intersects_polygon(&self.cell_rect((i, j)), &cover)
                };
                if hit {
                    self.cells[idx] = true;
                }
            }
        }
        Ok(())
    }
}

/// Conservative rasterization: a cell is occupied iff its closed square
/// intersects any of `polygons`.
pub fn rasterize(polygons: &[ConvexPolygon], bounds: Rect, resolution: f64) -> Result<Grid, GeometryError> {
    let mut grid = Grid::new(bounds, resolution)?;
    for p in polygons {
        grid.stamp(p);
    }
    Ok(grid)
}
