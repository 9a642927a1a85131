//! 8-connected grid search.
//!
//! Path costs are tracked as exact (orthogonal, diagonal) move counts so that
//! two searches over the same grid agree bit for bit on equal-cost paths.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};
use std::f64::consts::SQRT_2;

use thiserror::Error;

use super::{orient, ComponentKind, Configuration, PathComponent};
use crate::geometry::{Cell, Grid};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("start lies outside the grid")]
    StartOutsideGrid,
    #[error("start cell is occupied")]
    StartBlocked,
    #[error("goal set is empty")]
    EmptyGoals,
}

/// A cell path with its move counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridPath {
    pub cells: Vec<Cell>,
    pub orthogonal: u32,
    pub diagonal: u32,
}

impl GridPath {
    /// Length in meters on a grid of the given resolution.
    pub fn cost(&self, resolution: f64) -> f64 {
        resolution * (self.orthogonal as f64 + self.diagonal as f64 * SQRT_2)
    }

    /// Cell centres with headings; endpoints take the given headings.
    pub fn to_component(&self, grid: &Grid, kind: ComponentKind, start_heading: f64, goal_heading: f64) -> PathComponent {
        let pts: Vec<_> = self.cells.iter().map(|&c| grid.cell_center(c)).collect();
        PathComponent {
            kind,
            waypoints: orient(&pts, start_heading, goal_heading),
            cost: self.cost(grid.resolution()),
        }
    }
}

const NEIGHBORS: [(isize, isize); 8] = [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, 1), (-1, -1), (1, -1)];

/// Steps from `cell` allowed by the grid: into free in-bounds cells, and
/// diagonally only when at least one of the two orthogonal cells is free.
pub(crate) fn successors(grid: &Grid, (i, j): Cell) -> impl Iterator<Item = (Cell, bool)> + '_ {
    NEIGHBORS.iter().filter_map(move |&(di, dj)| {
        let (ni, nj) = (i as isize + di, j as isize + dj);
        if !grid.in_bounds(ni, nj) {
            return None;
        }
        let next = (ni as usize, nj as usize);
        if grid.is_occupied(next) {
            return None;
        }
        let diagonal = di != 0 && dj != 0;
        if diagonal && grid.is_occupied((ni as usize, j)) && grid.is_occupied((i, nj as usize)) {
            return None;
        }
        Some((next, diagonal))
    })
}

/// Octile distance in cell units.
pub(crate) fn octile(a: Cell, b: Cell) -> f64 {
    let dx = a.0.abs_diff(b.0) as f64;
    let dy = a.1.abs_diff(b.1) as f64;
    dx.max(dy) + (SQRT_2 - 1.0) * dx.min(dy)
}

#[derive(PartialEq)]
struct Entry {
    f: f64,
    h: f64,
    idx: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    // Reversed: BinaryHeap is a max-heap, the smallest (f, h, idx) pops first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then_with(|| other.h.total_cmp(&self.h))
            .then_with(|| other.idx.cmp(&self.idx))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Goal counts above which the heuristic is dropped (uniform-cost search).
const HEURISTIC_GOAL_LIMIT: usize = 64;

/// One best-first expansion from `start` that settles every goal cell it can
/// reach. Returns a path per goal, `None` for unreachable ones. Occupied
/// goal cells are never reached.
pub fn search_cells(grid: &Grid, start: Cell, goals: &[Cell]) -> Result<Vec<Option<GridPath>>, SearchError> {
    if goals.is_empty() {
        return Err(SearchError::EmptyGoals);
    }
    if grid.is_occupied(start) {
        return Err(SearchError::StartBlocked);
    }
    let n = grid.len();
    let mut goal_of: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, &g) in goals.iter().enumerate() {
        goal_of.entry(grid.index(g)).or_default().push(k);
    }
    let use_h = goals.len() <= HEURISTIC_GOAL_LIMIT;
    let heuristic = |c: Cell| {
        if use_h {
            goals.iter().map(|&g| octile(c, g)).fold(f64::INFINITY, f64::min)
        } else {
            0.0
        }
    };

    let mut orth = vec![u32::MAX; n];
    let mut diag = vec![u32::MAX; n];
    let mut g = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    let mut settled = vec![false; n];
    let mut remaining = goal_of.len();
    let mut heap = BinaryHeap::new();

    let s = grid.index(start);
    orth[s] = 0;
    diag[s] = 0;
    g[s] = 0.0;
    let h0 = heuristic(start);
    heap.push(Entry { f: h0, h: h0, idx: s });

    while let Some(Entry { f, h, idx }) = heap.pop() {
        if settled[idx] || f > g[idx] + h {
            continue;
        }
        settled[idx] = true;
        if goal_of.contains_key(&idx) {
            remaining -= 1;
            if remaining == 0 {
                break;
            }
        }
        let cell = grid.cell_of_index(idx);
        for (next, diagonal) in successors(grid, cell) {
            let ni = grid.index(next);
            if settled[ni] {
                continue;
            }
            let (o, d) = if diagonal { (orth[idx], diag[idx] + 1) } else { (orth[idx] + 1, diag[idx]) };
            let cand = o as f64 + d as f64 * SQRT_2;
            if cand < g[ni] {
                g[ni] = cand;
                orth[ni] = o;
                diag[ni] = d;
                parent[ni] = idx;
                let hn = heuristic(next);
                heap.push(Entry { f: cand + hn, h: hn, idx: ni });
            }
        }
    }

    let mut out = vec![None; goals.len()];
    for (&idx, ks) in &goal_of {
        if !settled[idx] {
            continue;
        }
        let mut cells = vec![grid.cell_of_index(idx)];
        let mut cur = idx;
        while cur != s {
            cur = parent[cur];
            cells.push(grid.cell_of_index(cur));
        }
        cells.reverse();
        let path = GridPath {
            cells,
            orthogonal: orth[idx],
            diagonal: diag[idx],
        };
        for &k in ks {
            out[k] = Some(path.clone());
        }
    }
    Ok(out)
}

/// Shortest path between two cells, `None` if `goal` is unreachable.
pub fn astar_cells(grid: &Grid, start: Cell, goal: Cell) -> Result<Option<GridPath>, SearchError> {
    Ok(search_cells(grid, start, &[goal])?.pop().flatten())
}

fn cell_of(grid: &Grid, q: &Configuration) -> Option<Cell> {
    grid.cell_at(q.position)
}

/// Shortest 8-connected path between the cells containing `start` and
/// `goal`, or `None` if the goal is unreachable (including an occupied or
/// out-of-grid goal).
pub fn astar(grid: &Grid, start: Configuration, goal: Configuration) -> Result<Option<PathComponent>, SearchError> {
    let s = cell_of(grid, &start).ok_or(SearchError::StartOutsideGrid)?;
    if grid.is_occupied(s) {
        return Err(SearchError::StartBlocked);
    }
    let Some(gc) = cell_of(grid, &goal) else {
        return Ok(None);
    };
    if grid.is_occupied(gc) {
        return Ok(None);
    }
    let path = search_cells(grid, s, &[gc])?.pop().flatten();
    Ok(path.map(|p| p.to_component(grid, ComponentKind::C1, start.heading, goal.heading)))
}

/// Shortest paths from `start` to every goal, from a single expansion.
/// Keys are indices into `goals`; unreachable goals are absent.
pub fn multigoal_astar(
    grid: &Grid,
    start: Configuration,
    goals: &[Configuration],
) -> Result<BTreeMap<usize, PathComponent>, SearchError> {
    if goals.is_empty() {
        return Err(SearchError::EmptyGoals);
    }
    let s = cell_of(grid, &start).ok_or(SearchError::StartOutsideGrid)?;
    let mut cells = Vec::new();
    let mut owners = Vec::new();
    for (k, q) in goals.iter().enumerate() {
        if let Some(c) = cell_of(grid, q).filter(|&c| grid.is_free(c)) {
            cells.push(c);
            owners.push(k);
        }
    }
    if cells.is_empty() {
        if grid.is_occupied(s) {
            return Err(SearchError::StartBlocked);
        }
        return Ok(BTreeMap::new());
    }
    let paths = search_cells(grid, s, &cells)?;
    Ok(paths
        .into_iter()
        .zip(owners)
        .filter_map(|(p, k)| p.map(|p| (k, p.to_component(grid, ComponentKind::C1, start.heading, goals[k].heading))))
        .collect())
}
