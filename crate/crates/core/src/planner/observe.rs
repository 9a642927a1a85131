//! Observation planning for obstacles whose movability is still unknown.

use super::{CSpace, ComponentKind, Configuration, PathComponent};
use crate::geometry::{contains_polygon, GeometryError, Rect};
use crate::world::{Obstacle, World};

/// Whether the semantic sensor at `q` identifies `o` and `q` lies in the
/// observation distance band.
pub(crate) fn observes(w: &World, o: &Obstacle, q: &Configuration) -> bool {
    let d = o.footprint.distance_to_point(q.position);
    d >= w.sensor.obs_min && d <= w.sensor.obs_max && contains_polygon(&w.sensor.s_fov(*q), &o.footprint)
}

/// The last waypoint of `c1` that observes `o`, if any.
pub fn get_last_look_q(w: &World, o: &Obstacle, c1: &PathComponent) -> Option<Configuration> {
    c1.waypoints.iter().rev().find(|q| observes(w, o, q)).copied()
}

/// Splits `c1` at the last waypoint equal to `q_look` into the part before
/// (as `c0`) and the part after (as `c1`). Both contain `q_look`.
pub fn split_at_pose(c1: &PathComponent, q_look: &Configuration) -> Option<(PathComponent, PathComponent)> {
    let k = c1.waypoints.iter().rposition(|q| q == q_look)?;
    Some((
        PathComponent::from_waypoints(ComponentKind::C0, c1.waypoints[..=k].to_vec()),
        PathComponent::from_waypoints(ComponentKind::C1, c1.waypoints[k..].to_vec()),
    ))
}

/// Grid poses from which `o` can be observed: free cell centres at a
/// distance from `o` within the observation band, facing `o`'s centroid,
/// with `o` entirely inside the semantic field of view. Row-major order.
pub fn get_ql(w: &World, o: &Obstacle) -> Result<Vec<Configuration>, GeometryError> {
    let cs = CSpace::of_world(w)?;
    Ok(get_ql_in(w, o, &cs))
}

pub(crate) fn get_ql_in(w: &World, o: &Obstacle, cs: &CSpace) -> Vec<Configuration> {
    let grid = &cs.grid;
    let c = o.footprint.centroid();
    let area: Rect = o.footprint.bounding_box().expanded(w.sensor.obs_max);
    let Some(((i0, j0), (i1, j1))) = grid.cell_span(&area) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for j in j0..=j1 {
        for i in i0..=i1 {
            if grid.is_occupied((i, j)) {
                continue;
            }
            let p = grid.cell_center((i, j));
            let q = Configuration::new(p, (c - p).angle());
            if observes(w, o, &q) {
                out.push(q);
            }
        }
    }
    out
}

/// Best observation detour: `c0` from `q_r` to some observing pose and `c1`
/// from there to `q_manip`, minimizing their summed cost.
pub fn compute_c0_c1(
    w: &World,
    o: &Obstacle,
    q_r: Configuration,
    q_manip: Configuration,
) -> Result<Option<(PathComponent, PathComponent)>, GeometryError> {
    let cs = CSpace::of_world(w)?;
    Ok(compute_c0_c1_in(w, o, q_r, q_manip, &cs))
}

pub(crate) fn compute_c0_c1_in(
    w: &World,
    o: &Obstacle,
    q_r: Configuration,
    q_manip: Configuration,
    cs: &CSpace,
) -> Option<(PathComponent, PathComponent)> {
    let ql = get_ql_in(w, o, cs);
    if ql.is_empty() {
        return None;
    }
    let from_manip = cs.plan_multi(q_manip, &ql, ComponentKind::C1);
    if from_manip.is_empty() {
        return None;
    }
    let from_r = cs.plan_multi(q_r, &ql, ComponentKind::C0);
    let (k, _) = from_r
        .iter()
        .filter_map(|(k, c0)| from_manip.get(k).map(|c1| (*k, c0.cost + c1.cost)))
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))?;
    let c0 = from_r[&k].clone();
    let c1 = from_manip[&k].reversed(ql[k].heading, q_manip.heading);
    Some((c0, c1))
}
