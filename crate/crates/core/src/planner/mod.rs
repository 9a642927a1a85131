//! Plan construction: grid search, push simulation, observation planning and
//! the obstacle-iterating top-level planner.
//!
//! A plan is at most four path components. `c0` brings the robot to a pose
//! from which an unidentified obstacle can be observed, `c1` reaches the
//! contact configuration, `c2` is the straight push, `c3` reaches the goal.
//! A plan that moves nothing is a single `c1`.

mod cspace;
mod execute;
mod observe;
mod obstacle;
mod push;
mod search;

use serde::{Deserialize, Serialize};

use crate::geometry::{normalize_angle, Point};
use crate::world::ObstacleId;

pub use cspace::CSpace;
pub use execute::{make_and_execute_plan, make_plan, ExecuteError, Mission, MissionOutcome};
pub use observe::{compute_c0_c1, get_last_look_q, get_ql, split_at_pose};
pub use obstacle::make_plan_for_obstacle;
pub(crate) use push::push_blocked;
pub use push::{affordable_actions, c_est, check_new_opening, q_for, sim_one_step, CONTACT_GAP};
pub use search::{astar, astar_cells, multigoal_astar, search_cells, GridPath, SearchError};

/// Robot pose. The heading only orients the sensors; turning is free.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub position: Point,
    pub heading: f64,
}

impl Configuration {
    pub fn new(position: Point, heading: f64) -> Self {
        Self {
            position,
            heading: normalize_angle(heading),
        }
    }

    pub fn at(x: f64, y: f64, heading: f64) -> Self {
        Self::new(Point::new(x, y), heading)
    }

    pub fn distance(&self, other: &Configuration) -> f64 {
        self.position.distance(other.position)
    }
}

/// One unit push on one side of an obstacle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PushAction {
    pub obstacle_id: ObstacleId,
    pub side_index: usize,
    /// Inward normal of the pushed side.
    pub direction: Point,
    pub step: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    C0,
    C1,
    C2,
    C3,
}

impl ComponentKind {
    pub fn label(self) -> &'static str {
        match self {
            ComponentKind::C0 => "c0",
            ComponentKind::C1 => "c1",
            ComponentKind::C2 => "c2",
            ComponentKind::C3 => "c3",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathComponent {
    pub kind: ComponentKind,
    pub waypoints: Vec<Configuration>,
    /// Sum of consecutive waypoint distances.
    pub cost: f64,
}

impl PathComponent {
    /// Builds a component and sets its cost from the waypoints.
    pub fn from_waypoints(kind: ComponentKind, waypoints: Vec<Configuration>) -> Self {
        let cost = polyline_length(&waypoints);
        Self { kind, waypoints, cost }
    }

    pub fn first(&self) -> Configuration {
        self.waypoints[0]
    }

    pub fn last(&self) -> Configuration {
        self.waypoints[self.waypoints.len() - 1]
    }

    pub fn with_kind(mut self, kind: ComponentKind) -> Self {
        self.kind = kind;
        self
    }

    /// The same path walked backwards. Intermediate headings are recomputed
    /// to face the next waypoint; the endpoints take the given headings.
    pub fn reversed(&self, start_heading: f64, end_heading: f64) -> Self {
        let mut pts: Vec<Point> = self.waypoints.iter().rev().map(|c| c.position).collect();
        if pts.is_empty() {
            pts.push(Point::ORIGIN);
        }
        Self::from_waypoints(self.kind, orient(&pts, start_heading, end_heading))
    }
}

/// Headings for a polyline: intermediate points face the next point, the
/// endpoints keep the supplied headings.
pub(crate) fn orient(points: &[Point], start_heading: f64, end_heading: f64) -> Vec<Configuration> {
    let n = points.len();
    (0..n)
        .map(|k| {
            let heading = if k == 0 {
                start_heading
            } else if k == n - 1 {
                end_heading
            } else {
                (points[k + 1] - points[k]).angle()
            };
            Configuration::new(points[k], heading)
        })
        .collect()
}

pub(crate) fn polyline_length(waypoints: &[Configuration]) -> f64 {
    waypoints.windows(2).map(|w| w[0].distance(&w[1])).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanTarget {
    pub obstacle_id: ObstacleId,
    pub action: PushAction,
    pub push_count: usize,
    /// How an unidentified target gets observed before the push.
    pub observation: Option<Observation>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Observation {
    /// From a pose already on the way to the contact configuration.
    AlongC1,
    /// From a pose reached by a dedicated detour.
    Detour,
}

impl Observation {
    pub fn label(self) -> &'static str {
        match self {
            Observation::AlongC1 => "along-c1",
            Observation::Detour => "detour",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Plan {
    pub components: Vec<PathComponent>,
    pub target: Option<PlanTarget>,
    pub total_cost: f64,
}

impl Plan {
    pub fn transit(c1: PathComponent) -> Self {
        let total_cost = c1.cost;
        Self {
            components: vec![c1.with_kind(ComponentKind::C1)],
            target: None,
            total_cost,
        }
    }

    pub fn with_push(components: Vec<PathComponent>, target: PlanTarget) -> Self {
        let total_cost = components.iter().map(|c| c.cost).sum();
        Self {
            components,
            target: Some(target),
            total_cost,
        }
    }

    pub fn cost(&self) -> f64 {
        self.total_cost
    }

    pub fn component(&self, kind: ComponentKind) -> Option<&PathComponent> {
        self.components.iter().find(|c| c.kind == kind)
    }

    pub fn start(&self) -> Configuration {
        self.components[0].first()
    }

    pub fn end(&self) -> Configuration {
        self.components[self.components.len() - 1].last()
    }

    /// Components chain end to start and the total is their sum.
    pub fn is_well_formed(&self) -> bool {
        let chained = self.components.windows(2).all(|w| w[0].last() == w[1].first());
        let sum: f64 = self.components.iter().map(|c| c.cost).sum();
        !self.components.is_empty() && chained && (sum - self.total_cost).abs() <= 1e-9
    }
}

/// Cost of an optional plan, infinite when absent.
pub fn cost_of(plan: Option<&Plan>) -> f64 {
    plan.map_or(f64::INFINITY, Plan::cost)
}
