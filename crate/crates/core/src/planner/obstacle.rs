//! Best plan that moves one given obstacle.

use super::observe::{compute_c0_c1_in, get_last_look_q, split_at_pose};
use super::push::{affordable_actions, c_est, check_new_opening, q_for, sim_one_step};
use super::{cost_of, CSpace, ComponentKind, Configuration, Observation, PathComponent, Plan, PlanTarget};
use crate::geometry::GeometryError;
use crate::world::{is_movable, is_unknown, not_in_taboo, MovabilityState, World};

/// Cheapest plan that pushes obstacle `id` along one of its side normals,
/// or `None` if no such plan exists.
///
/// Push simulation for an action stops once the cost estimate exceeds the
/// cheaper of `p_opt` and the best plan found so far. A push count yields a
/// candidate only when it opens new free space around the obstacle and, in
/// socially-aware mode, leaves the obstacle outside every taboo zone.
/// `p_opt` is only read.
pub fn make_plan_for_obstacle(
    w: &World,
    q_r: Configuration,
    q_goal: Configuration,
    id: &str,
    p_opt: Option<&Plan>,
) -> Result<Option<Plan>, GeometryError> {
    let cs = CSpace::of_world(w)?;
    make_plan_for_obstacle_in(w, q_r, q_goal, id, cost_of(p_opt), &cs)
}

pub(crate) fn make_plan_for_obstacle_in(
    w: &World,
    q_r: Configuration,
    q_goal: Configuration,
    id: &str,
    p_opt_cost: f64,
    cs_all: &CSpace,
) -> Result<Option<Plan>, GeometryError> {
    let Some(o) = w.obstacle(id) else {
        return Ok(None);
    };
    if o.movability == MovabilityState::Unmovable {
        return Ok(None);
    }
    let cs_rest = CSpace::of_world_except(w, id)?;
    let mut best: Option<Plan> = None;

    for act in affordable_actions(o, w.unit_push) {
        let q_manip = q_for(&o.footprint, &act, w.robot_radius);
        if !cs_all.disc_free(q_manip.position) {
            continue;
        }
        let Some(c1) = cs_all.plan(q_r, q_manip, ComponentKind::C1) else {
            continue;
        };
        let (c0, c1, observation) = if is_unknown(o) {
            match get_last_look_q(w, o, &c1).and_then(|q| split_at_pose(&c1, &q)) {
                Some((c0, c1)) => (Some(c0), c1, Some(Observation::AlongC1)),
                None => match compute_c0_c1_in(w, o, q_r, q_manip, cs_all) {
                    Some((c0, c1)) => (Some(c0), c1, Some(Observation::Detour)),
                    None => continue,
                },
            }
        } else {
            (None, c1, None)
        };
        if !(is_movable(o) || (is_unknown(o) && c0.is_some())) {
            continue;
        }
        let prefix = c0.as_ref().map_or(0.0, |c| c.cost) + c1.cost;

        let mut w_sim = w.clone();
        let mut trail = vec![q_manip];
        let mut q_sim = sim_one_step(&mut w_sim, &act, q_manip);
        let mut count = 1;
        while let Some(q) = q_sim {
            trail.push(q);
            let footprint = &w_sim.obstacles[id].footprint;
            let bound = p_opt_cost.min(cost_of(best.as_ref()));
            if c_est(prefix, count, act.step, footprint, &q_goal) > bound {
                break;
            }
            let placement_ok = !w.taboo_gating() || not_in_taboo(w, footprint);
            if placement_ok && check_new_opening(w, &w_sim, id) {
                let cs_sim = cs_rest.with_polygon(footprint)?;
                if let Some(c3) = cs_sim.plan(q, q_goal, ComponentKind::C3) {
                    let c2 = PathComponent::from_waypoints(ComponentKind::C2, trail.clone());
                    let mut components: Vec<PathComponent> = c0.iter().cloned().collect();
                    components.extend([c1.clone(), c2, c3]);
                    let plan = Plan::with_push(
                        components,
                        PlanTarget {
                            obstacle_id: id.to_string(),
                            action: act.clone(),
                            push_count: count,
                            observation,
                        },
                    );
                    if plan.cost() < cost_of(best.as_ref()) {
                        best = Some(plan);
                    }
                }
            }
            count += 1;
            q_sim = sim_one_step(&mut w_sim, &act, q);
        }
    }
    Ok(best)
}
