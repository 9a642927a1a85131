//! Push actions, their simulation, and the pruning and gating tests applied
//! while simulating them.

use std::collections::BTreeSet;

use super::cspace::mark_border;
use super::search::successors;
use super::{Configuration, PushAction};
use crate::geometry::{intersects, ConvexPolygon, Grid, Point, Rect};
use crate::world::{Obstacle, World};

/// Distance kept between the robot disc and the pushed side.
pub const CONTACT_GAP: f64 = 0.0;

/// One push per side, along the side's inward normal, ordered by side index.
pub fn affordable_actions(o: &Obstacle, step: f64) -> Vec<PushAction> {
    (0..o.footprint.len())
        .map(|i| PushAction {
            obstacle_id: o.id.clone(),
            side_index: i,
            direction: -o.footprint.outward_normal(i),
            step,
        })
        .collect()
}

/// Contact configuration for `act`: the robot disc touches the midpoint of
/// the pushed side from outside and faces the push direction.
pub fn q_for(footprint: &ConvexPolygon, act: &PushAction, robot_radius: f64) -> Configuration {
    let (a, b) = footprint.edge(act.side_index);
    let mid = a.lerp(b, 0.5);
    Configuration::new(mid - act.direction * (robot_radius + CONTACT_GAP), act.direction.angle())
}

/// True when one push step from the given state would be blocked: the moved
/// footprint touches `others` or leaves `bounds`, or the robot disc would
/// overlap an interior of `others` or leave `bounds`.
pub(crate) fn push_blocked<'a>(
    mut others: impl Iterator<Item = &'a ConvexPolygon>,
    bounds: Rect,
    footprint: &ConvexPolygon,
    robot: Point,
    robot_radius: f64,
    offset: Point,
) -> bool {
    let moved = footprint.translated(offset);
    let bb = moved.bounding_box();
    let inside = bb.min.x >= bounds.min.x && bb.min.y >= bounds.min.y && bb.max.x <= bounds.max.x && bb.max.y <= bounds.max.y;
    if !inside {
        return true;
    }
    let to = robot + offset;
    if !super::cspace::disc_in_bounds(bounds, robot_radius, to) {
        return true;
    }
    others.any(|p| intersects(p, &moved) || p.overlaps_capsule(robot, to, robot_radius))
}

/// Applies one unit push to obstacle `act.obstacle_id` and the robot at `q`
/// inside `w_sim`. Returns the new robot configuration, or `None` (leaving
/// `w_sim` untouched) when the step is blocked.
pub fn sim_one_step(w_sim: &mut World, act: &PushAction, q: Configuration) -> Option<Configuration> {
    let o = w_sim.obstacles.get(&act.obstacle_id)?;
    let offset = act.direction * act.step;
    if push_blocked(
        w_sim.polygons_except(&act.obstacle_id),
        w_sim.bounds,
        &o.footprint,
        q.position,
        w_sim.robot_radius,
        offset,
    ) {
        return None;
    }
    let moved = o.footprint.translated(offset);
    w_sim.obstacles.get_mut(&act.obstacle_id)?.footprint = moved;
    let next = Configuration::new(q.position + offset, q.heading);
    w_sim.robot = next;
    Some(next)
}

/// Lower estimate of a push plan's cost: the cost up to contact, the push
/// length, and the straight-line gap between the pushed footprint and the
/// goal.
pub fn c_est(c1_cost: f64, count: usize, step: f64, o_footprint: &ConvexPolygon, q_goal: &Configuration) -> f64 {
    c1_cost + count as f64 * step + o_footprint.distance_to_point(q_goal.position)
}

/// Whether moving obstacle `id` from its footprint in `w` to its footprint
/// in `w_sim` joins two parts of free space that were separate.
///
/// Both worlds are rasterized into configuration space over a window around
/// the old and new footprints, wide enough that the obstacle never affects
/// the window border. The move opens a passage iff some connected free
/// region in `w_sim` touches the border in places that belong to different
/// free regions in `w`.
pub fn check_new_opening(w: &World, w_sim: &World, id: &str) -> bool {
    let (Some(old), Some(new)) = (w.obstacle(id), w_sim.obstacle(id)) else {
        return false;
    };
    let res = w.resolution;
    let r = w.robot_radius;
    let raw = old
        .footprint
        .bounding_box()
        .union(&new.footprint.bounding_box())
        .expanded(2.0 * r + 2.0 * res);
    let Some(window) = snap_window(raw, w.bounds, res) else {
        return false;
    };
    let (Some(before), Some(after)) = (
        local_grid(w, window, &old.footprint, id),
        local_grid(w, window, &new.footprint, id),
    ) else {
        return false;
    };
    let lb = label(&before);
    let la = label(&after);
    let mut groups: std::collections::BTreeMap<usize, BTreeSet<usize>> = Default::default();
    for c in border_cells(&before) {
        let idx = before.index(c);
        if let (Some(b), Some(a)) = (lb[idx], la[idx]) {
            let set = groups.entry(a).or_default();
            set.insert(b);
            if set.len() >= 2 {
                return true;
            }
        }
    }
    false
}

/// `raw` grown outward to whole global cells and clipped to `bounds`.
fn snap_window(raw: Rect, bounds: Rect, res: f64) -> Option<Rect> {
    let o = bounds.min;
    let snap_lo = |v: f64, origin: f64| origin + ((v - origin) / res).floor() * res;
    let snap_hi = |v: f64, origin: f64| origin + ((v - origin) / res).ceil() * res;
    let min = Point::new(snap_lo(raw.min.x, o.x).max(bounds.min.x), snap_lo(raw.min.y, o.y).max(bounds.min.y));
    let max = Point::new(snap_hi(raw.max.x, o.x).min(bounds.max.x), snap_hi(raw.max.y, o.y).min(bounds.max.y));
    (max.x - min.x >= res && max.y - min.y >= res).then(|| Rect::new(min, max))
}

/// Configuration-space grid over `window`: static map, every known obstacle
/// except `id`, and `footprint` in its place.
fn local_grid(w: &World, window: Rect, footprint: &ConvexPolygon, id: &str) -> Option<Grid> {
    let mut g = Grid::new(window, w.resolution).ok()?;
    mark_border(&mut g, w.bounds, w.robot_radius);
    let reach = window.expanded(w.robot_radius * 1.01 + w.resolution);
    for p in w.polygons_except(id).chain(std::iter::once(footprint)) {
        if p.bounding_box().overlaps(&reach) {
            g.stamp_offset(p, w.robot_radius).ok()?;
        }
    }
    Some(g)
}

/// Connected-component label per cell under the search's move rules, `None`
/// for occupied cells.
fn label(grid: &Grid) -> Vec<Option<usize>> {
    let mut labels = vec![None; grid.len()];
    let mut next = 0;
    for start in 0..grid.len() {
        let c = grid.cell_of_index(start);
        if labels[start].is_some() || grid.is_occupied(c) {
            continue;
        }
        labels[start] = Some(next);
        let mut stack = vec![c];
        while let Some(cell) = stack.pop() {
            for (n, _) in successors(grid, cell) {
                let ni = grid.index(n);
                if labels[ni].is_none() {
                    labels[ni] = Some(next);
                    stack.push(n);
                }
            }
        }
        next += 1;
    }
    labels
}

fn border_cells(grid: &Grid) -> impl Iterator<Item = (usize, usize)> + '_ {
    let (w, h) = (grid.width(), grid.height());
    (0..grid.len())
        .map(move |k| (k % w, k / w))
        .filter(move |&(i, j)| i == 0 || j == 0 || i + 1 == w || j + 1 == h)
}

#[cfg(test)]
mod tests {
    use std::collections::{BTreeMap, BTreeSet};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    use super::*;
    use crate::world::{Mode, MovabilityState, SensorModel, TabooLayer};

    fn obstacle(id: &str, footprint: ConvexPolygon) -> Obstacle {
        Obstacle {
            id: id.into(),
            footprint,
            movability: MovabilityState::Movable,
            class_label: Some("box".into()),
        }
    }

    pub(crate) fn world(static_map: Vec<ConvexPolygon>, obstacles: Vec<Obstacle>) -> World {
        World {
            bounds: Rect::new(Point::ORIGIN, Point::new(10.0, 6.0)),
            static_map,
            obstacles: obstacles.into_iter().map(|o| (o.id.clone(), o)).collect::<BTreeMap<_, _>>(),
            taboo: TabooLayer::default(),
            robot: Configuration::at(1.0, 1.0, 0.0),
            robot_radius: 0.3,
            whitelist: BTreeSet::new(),
            sensor: SensorModel::default(),
            resolution: 0.05,
            unit_push: 0.1,
            mode: Mode::Snamo,
        }
    }

    #[test]
    fn square_has_four_axis_actions() {
        let o = obstacle("a", ConvexPolygon::rectangle(0.0, 0.0, 1.0, 1.0).unwrap());
        let dirs: Vec<Point> = affordable_actions(&o, 0.1).iter().map(|a| a.direction).collect();
        let expect = [Point::new(0.0, 1.0), Point::new(-1.0, 0.0), Point::new(0.0, -1.0), Point::new(1.0, 0.0)];
        for (d, e) in dirs.iter().zip(expect) {
            assert!(d.distance(e) < 1e-12);
        }
        let tri = obstacle("t", ConvexPolygon::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)]).unwrap());
        assert_eq!(affordable_actions(&tri, 0.1).len(), 3);
    }

    #[test]
    fn contact_configurations() {
        let sq = ConvexPolygon::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
        let o = obstacle("a", sq.clone());
        let acts = affordable_actions(&o, 0.1);
        let plus_x = acts.iter().find(|a| a.direction.x > 0.5).unwrap();
        let q = q_for(&sq, plus_x, 0.3);
        assert!(q.position.distance(Point::new(-0.3, 0.5)) < 1e-12 && q.heading.abs() < 1e-12);
        let minus_y = acts.iter().find(|a| a.direction.y < -0.5).unwrap();
        let q = q_for(&sq, minus_y, 0.3);
        assert!(q.position.distance(Point::new(0.5, 1.3)) < 1e-12);
        assert!((q.heading + FRAC_PI_2).abs() < 1e-12);

        let diamond = ConvexPolygon::regular(Point::new(2.0, 2.0), 1.0, 4, FRAC_PI_4).unwrap();
        for act in affordable_actions(&obstacle("d", diamond.clone()), 0.1) {
            let q = q_for(&diamond, &act, 0.3);
            let (a, b) = diamond.edge(act.side_index);
            let mid = a.lerp(b, 0.5);
            let off = q.position - mid;
            assert!((off.norm() - 0.3).abs() < 1e-12);
            assert!(off.normalized().distance(diamond.outward_normal(act.side_index)) < 1e-12);
        }
    }

    #[test]
    fn push_two_and_a_half_steps_from_wall() {
        let wall = ConvexPolygon::rectangle(6.0, 0.0, 6.2, 6.0).unwrap();
        let boxy = ConvexPolygon::rectangle(5.0, 2.0, 5.75, 3.0).unwrap();
        let mut w = world(vec![wall], vec![obstacle("b", boxy.clone())]);
        let act = affordable_actions(w.obstacle("b").unwrap(), 0.1)
            .into_iter()
            .find(|a| a.direction.x > 0.5)
            .unwrap();
        let mut q = q_for(&boxy, &act, 0.3);
        let mut count = 0;
        while let Some(next) = sim_one_step(&mut w, &act, q) {
            q = next;
            count += 1;
        }
        assert_eq!(count, 2);
        let fp = &w.obstacle("b").unwrap().footprint;
        assert!(fp.vertices().iter().zip(boxy.vertices()).all(|(a, b)| a.distance(*b + Point::new(0.2, 0.0)) < 1e-12));
    }

    #[test]
    fn c_est_formula() {
        let sq = ConvexPolygon::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(c_est(2.0, 0, 0.1, &sq, &Configuration::at(1.0, 0.5, 0.0)), 2.0);
        let v = c_est(5.0, 3, 0.1, &sq, &Configuration::at(3.0, 0.5, 0.0));
        assert!((v - 7.3).abs() < 1e-12);
    }

    fn corridor(boxy: ConvexPolygon) -> World {
        // corridor 1.0 wide along x between y = 2.5 and y = 3.5
        world(
            vec![
                ConvexPolygon::rectangle(0.0, 2.3, 10.0, 2.5).unwrap(),
                ConvexPolygon::rectangle(0.0, 3.5, 4.5, 3.7).unwrap(),
                ConvexPolygon::rectangle(5.5, 3.5, 10.0, 3.7).unwrap(),
            ],
            vec![obstacle("m", boxy)],
        )
    }

    #[test]
    fn opening_tests() {
        // open space, nothing changes connectivity
        let w = world(vec![], vec![obstacle("m", ConvexPolygon::rectangle(4.0, 2.0, 5.0, 3.0).unwrap())]);
        let mut w_sim = w.clone();
        let act = affordable_actions(w.obstacle("m").unwrap(), 0.1).remove(0);
        let q = q_for(&w.obstacle("m").unwrap().footprint, &act, 0.3);
        sim_one_step(&mut w_sim, &act, q).unwrap();
        assert!(!check_new_opening(&w, &w_sim, "m"));

        // box plugging the corridor below a side opening, pushed up into it
        let w = corridor(ConvexPolygon::rectangle(4.6, 2.6, 5.4, 3.4).unwrap());
        let up = |k: f64| {
            let mut s = w.clone();
            s.obstacles.get_mut("m").unwrap().footprint = w.obstacle("m").unwrap().footprint.translated(Point::new(0.0, k));
            s
        };
        assert!(!check_new_opening(&w, &up(0.2), "m"));
        assert!(check_new_opening(&w, &up(1.0), "m"));
    }
}
