//! Oracles and world generators shared by the integration tests.
#![allow(dead_code)]

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::path::PathBuf;

use rand::Rng;
use snamo::geometry::{intersects, ConvexPolygon, Grid, Point, Rect};
use snamo::planner::{affordable_actions, c_est, q_for, CSpace, ComponentKind, PushAction};
use snamo::world::{Mode, MovabilityState, Obstacle, SensorModel, TabooLayer, World};
use snamo::Configuration;

pub const FIXTURES: [&str; 8] = [
    "two_rooms",
    "corridor_taboo",
    "observe_before_push",
    "push_failure_detour",
    "push_failure_dead_end",
    "hidden_obstacle",
    "hidden_obstacle_sealed",
    "empty",
];

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(format!("{name}.scn"))
}

/// Plain Dijkstra over 8-connected cells. A diagonal move is allowed unless
/// both cells it cuts past are occupied. Returns `(orthogonal, diagonal)`
/// step counts of a shortest path to every cell.
pub fn dijkstra(grid: &Grid, start: (usize, usize)) -> Vec<Option<(u32, u32)>> {
    let (w, h) = (grid.width() as i64, grid.height() as i64);
    let idx = |i: i64, j: i64| (j * w + i) as usize;
    let free = |i: i64, j: i64| i >= 0 && j >= 0 && i < w && j < h && grid.is_free((i as usize, j as usize));
    let mut best: Vec<Option<(u32, u32)>> = vec![None; grid.len()];
    let mut done = vec![false; grid.len()];
    let key = |(a, b): (u32, u32)| a as f64 + b as f64 * std::f64::consts::SQRT_2;
    let mut heap = BinaryHeap::new();
    let (si, sj) = (start.0 as i64, start.1 as i64);
    if !free(si, sj) {
        return best;
    }
    best[idx(si, sj)] = Some((0, 0));
    heap.push(Reverse((ordered(0.0), si, sj)));
    while let Some(Reverse((_, i, j))) = heap.pop() {
        let here = idx(i, j);
        if done[here] {
            continue;
        }
        done[here] = true;
        let (a, b) = best[here].unwrap();
        for di in -1i64..=1 {
            for dj in -1i64..=1 {
                if (di, dj) == (0, 0) || !free(i + di, j + dj) {
                    continue;
                }
                let diagonal = di != 0 && dj != 0;
                if diagonal && !free(i + di, j) && !free(i, j + dj) {
                    continue;
                }
                let cand = if diagonal { (a, b + 1) } else { (a + 1, b) };
                let n = idx(i + di, j + dj);
                if best[n].is_none_or(|old| key(cand) < key(old)) {
                    best[n] = Some(cand);
                    heap.push(Reverse((ordered(key(cand)), i + di, j + dj)));
                }
            }
        }
    }
    best
}

/// Total order on finite costs for the heap.
fn ordered(v: f64) -> u64 {
    v.to_bits()
}

pub fn random_grid(rng: &mut impl Rng, w: usize, h: usize, density: f64) -> Grid {
    let mut g = Grid::new(Rect::new(Point::new(0.0, 0.0), Point::new(w as f64, h as f64)), 1.0).unwrap();
    for j in 0..h {
        for i in 0..w {
            if rng.gen_bool(density) {
                g.set((i, j), true);
            }
        }
    }
    g
}

pub fn base_world(bounds: Rect, resolution: f64, mode: Mode) -> World {
    World {
        bounds,
        static_map: vec![],
        obstacles: BTreeMap::new(),
        taboo: TabooLayer::default(),
        robot: Configuration::at(0.0, 0.0, 0.0),
        robot_radius: 0.3,
        whitelist: BTreeSet::new(),
        sensor: SensorModel::default(),
        resolution,
        unit_push: 0.1,
        mode,
    }
}

pub fn known_box(id: &str, footprint: ConvexPolygon) -> Obstacle {
    Obstacle {
        id: id.into(),
        footprint,
        movability: MovabilityState::Movable,
        class_label: Some("box".into()),
    }
}

fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> ConvexPolygon {
    ConvexPolygon::rectangle(x0, y0, x1, y1).unwrap()
}

fn free_pose(rng: &mut impl Rng, w: &World, xs: (f64, f64), ys: (f64, f64)) -> Option<Configuration> {
    for _ in 0..200 {
        let p = Point::new(rng.gen_range(xs.0..xs.1), rng.gen_range(ys.0..ys.1));
        if !w.disc_collides(p) && w.polygons().all(|poly| poly.distance_to_point(p) > w.robot_radius + 0.05) {
            return Some(Configuration::new(p, rng.gen_range(-3.1..3.1)));
        }
    }
    None
}

/// A wall splits the room; its doorway is plugged by a box that can only be
/// pushed through. The robot starts on one side, the goal is on the other.
/// Sometimes a second, unrelated box stands in one of the rooms. Every
/// obstacle is known and movable.
pub fn door_world(rng: &mut impl Rng) -> Option<(World, Configuration, Configuration)> {
    let bounds = Rect::new(Point::new(0.0, 0.0), Point::new(6.0, 4.0));
    let mut w = base_world(bounds, 0.1, Mode::Namo);
    let wx = rng.gen_range(2.4..3.2);
    let dw = rng.gen_range(0.8..1.1);
    let dy = rng.gen_range(0.8..(4.0 - 0.8 - dw));
    w.static_map.push(rect(wx, 0.0, wx + 0.2, dy));
    w.static_map.push(rect(wx, dy + dw, wx + 0.2, 4.0));
    let gap = rng.gen_range(0.05..0.12);
    let b = rect(wx - rng.gen_range(0.1..0.4), dy + gap, wx + 0.2 + rng.gen_range(0.1..0.4), dy + dw - gap);
    w.obstacles.insert("door".into(), known_box("door", b));
    if rng.gen_bool(0.5) {
        let (cx, cy) = (rng.gen_range(0.6..5.4), rng.gen_range(0.6..3.4));
        let s = rng.gen_range(0.3..0.6);
        let d = rect(cx - s / 2.0, cy - s / 2.0, cx + s / 2.0, cy + s / 2.0);
        if w.polygons().all(|p| p.distance_to_polygon(&d) > 0.7) {
            w.obstacles.insert("other".into(), known_box("other", d));
        }
    }
    let q_r = free_pose(rng, &w, (0.4, wx - 0.8), (0.4, 3.6))?;
    let q_goal = free_pose(rng, &w, (wx + 1.2, 5.6), (0.4, 3.6))?;
    w.robot = q_r;
    Some((w, q_r, q_goal))
}

/// An open room with one to three convex boxes and sometimes a partial wall.
pub fn open_world(rng: &mut impl Rng) -> Option<(World, Configuration, Configuration)> {
    let bounds = Rect::new(Point::new(0.0, 0.0), Point::new(5.0, 4.0));
    let mut w = base_world(bounds, 0.1, Mode::Namo);
    if rng.gen_bool(0.5) {
        let x = rng.gen_range(1.5..3.5);
        let len = rng.gen_range(1.5..3.0);
        w.static_map.push(rect(x, 0.0, x + 0.2, len));
    }
    let n = rng.gen_range(1..=3);
    for k in 0..n {
        let c = Point::new(rng.gen_range(0.6..4.4), rng.gen_range(0.6..3.4));
        let sides = rng.gen_range(3..=6);
        let poly = ConvexPolygon::regular(c, rng.gen_range(0.25..0.5), sides, rng.gen_range(0.0..1.0)).ok()?;
        if w.polygons().any(|p| p.distance_to_polygon(&poly) < 0.1) || !poly.vertices().iter().all(|v| bounds.contains(*v)) {
            continue;
        }
        let id = format!("o{k}");
        w.obstacles.insert(id.clone(), known_box(&id, poly));
    }
    let q_r = free_pose(rng, &w, (0.4, 4.6), (0.4, 3.6))?;
    let q_goal = free_pose(rng, &w, (0.4, 4.6), (0.4, 3.6))?;
    w.robot = q_r;
    Some((w, q_r, q_goal))
}

/// Footprint after each unit push of `act` from contact, until a step is
/// blocked or `max_count` is reached: entry `k - 1` holds the state after `k`
/// pushes as (footprint, robot position).
pub fn push_sequence(w: &World, act: &PushAction, max_count: usize) -> Vec<(ConvexPolygon, Point)> {
    let o = &w.obstacles[&act.obstacle_id];
    let r = w.robot_radius;
    let others: Vec<&ConvexPolygon> = w.polygons_except(&act.obstacle_id).collect();
    let offset = act.direction * act.step;
    let inside = |p: &ConvexPolygon| p.vertices().iter().all(|v| w.bounds.contains(*v));
    let disc_inside = |c: Point| {
        c.x - r >= w.bounds.min.x - 1e-9
            && c.y - r >= w.bounds.min.y - 1e-9
            && c.x + r <= w.bounds.max.x + 1e-9
            && c.y + r <= w.bounds.max.y + 1e-9
    };
    let mut fp = o.footprint.clone();
    let mut robot = q_for(&o.footprint, act, r).position;
    let mut out = Vec::new();
    for _ in 0..max_count {
        let next_fp = fp.translated(offset);
        let next_robot = robot + offset;
        let blocked = !inside(&next_fp)
            || !disc_inside(next_robot)
            || others.iter().any(|p| intersects(p, &next_fp) || p.overlaps_capsule(robot, next_robot, r));
        if blocked {
            break;
        }
        fp = next_fp;
        robot = next_robot;
        out.push((fp.clone(), robot));
    }
    out
}

/// A push prefix simulated to `count` unit steps. `total` is infinite when
/// no path leads from there to the goal.
pub struct Candidate {
    pub obstacle: String,
    pub side: usize,
    pub count: usize,
    pub c1: f64,
    pub total: f64,
    pub c_est: f64,
}

pub fn enumerate_push_plans(w: &World, q_r: Configuration, q_goal: Configuration, max_count: usize) -> Vec<Candidate> {
    let cs_all = CSpace::of_world(w).unwrap();
    let mut out = Vec::new();
    for (id, o) in &w.obstacles {
        let cs_rest = CSpace::of_world_except(w, id).unwrap();
        for act in affordable_actions(o, w.unit_push) {
            let q_manip = q_for(&o.footprint, &act, w.robot_radius);
            if w.disc_collides(q_manip.position) || !w.disc_in_bounds(q_manip.position) {
                continue;
            }
            let Some(c1) = cs_all.plan(q_r, q_manip, ComponentKind::C1) else {
                continue;
            };
            for (k, (fp, robot)) in push_sequence(w, &act, max_count).into_iter().enumerate() {
                let count = k + 1;
                let q_sim = Configuration::new(robot, act.direction.angle());
                let total = match cs_rest.with_polygon(&fp).unwrap().plan(q_sim, q_goal, ComponentKind::C3) {
                    Some(c3) => c1.cost + count as f64 * act.step + c3.cost,
                    None => f64::INFINITY,
                };
                out.push(Candidate {
                    obstacle: id.clone(),
                    side: act.side_index,
                    count,
                    c1: c1.cost,
                    total,
                    c_est: c_est(c1.cost, count, act.step, &fp, &q_goal),
                });
            }
        }
    }
    out
}

/// Cheapest plan over the free path and every (obstacle, side, count) push.
pub fn brute_force_cost(w: &World, q_r: Configuration, q_goal: Configuration, max_count: usize) -> f64 {
    let free = CSpace::of_world(w)
        .unwrap()
        .plan(q_r, q_goal, ComponentKind::C1)
        .map_or(f64::INFINITY, |c| c.cost);
    enumerate_push_plans(w, q_r, q_goal, max_count)
        .iter()
        .map(|c| c.total)
        .fold(free, f64::min)
}

/// Prefixes whose estimate exceeds the cheapest completed plan extending
/// them: (obstacle, side, count, estimate, cheapest completion).
pub fn c_est_violations(w: &World, q_r: Configuration, q_goal: Configuration, max_count: usize) -> Vec<(String, usize, usize, f64, f64)> {
    let cands = enumerate_push_plans(w, q_r, q_goal, max_count);
    let mut out = Vec::new();
    for c in &cands {
        let completion = cands
            .iter()
            .filter(|d| d.obstacle == c.obstacle && d.side == c.side && d.count >= c.count)
            .map(|d| d.total)
            .fold(f64::INFINITY, f64::min);
        if c.c_est > completion + 1e-9 {
            out.push((c.obstacle.clone(), c.side, c.count, c.c_est, completion));
        }
    }
    out
}
