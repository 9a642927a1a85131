//! Ground-truth stepping and execution traces.
//!
//! The simulator owns no policy: it moves the robot or pushes an obstacle
//! when asked, refusing anything the true world does not allow.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{inflate_covering, intersects, rect_intersects_polygon, ConvexPolygon, Point, Rect};
use crate::planner::{q_for, Configuration, PushAction};
use crate::world::{GroundTruth, ObstacleId, TabooLayer};

/// Largest accepted transit step, relative to the grid resolution.
const MAX_STEP_FACTOR: f64 = std::f64::consts::SQRT_2;

/// Tolerated distance between the robot and the contact pose of a push.
pub const CONTACT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContractError {
    #[error("transit step of {distance} m exceeds one grid move")]
    NotAdjacent { distance: f64 },
    #[error("robot is {distance} m away from the contact pose of the push")]
    NotInContact { distance: f64 },
    #[error("no obstacle `{0}` in the ground truth")]
    UnknownObstacle(ObstacleId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransitOutcome {
    Moved,
    /// The move would overlap true geometry; the pose is unchanged.
    Collision,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PushOutcome {
    Moved,
    /// The obstacle or robot would collide; nothing moves.
    Blocked,
    /// Manipulation failed; nothing moves.
    Failed,
}

/// Moves the robot to `to` if the swept disc is clear in the true world.
///
/// A move of exactly one cell diagonally is also refused when both
/// orthogonally adjacent cell squares touch the robot-inflated geometry,
/// mirroring the planner's corner rule.
pub fn apply_transit(truth: &mut GroundTruth, to: Configuration) -> Result<TransitOutcome, ContractError> {
    let from = truth.robot.position;
    let distance = from.distance(to.position);
    if distance > MAX_STEP_FACTOR * truth.resolution + 1e-9 {
        return Err(ContractError::NotAdjacent { distance });
    }
    let r = truth.robot_radius;
    let blocked = !truth.disc_in_bounds(to.position) || truth.polygons().any(|p| p.overlaps_capsule(from, to.position, r));
    if blocked || corner_cut(truth, from, to.position) {
        return Ok(TransitOutcome::Collision);
    }
    truth.robot = to;
    Ok(TransitOutcome::Moved)
}

fn corner_cut(truth: &GroundTruth, from: Point, to: Point) -> bool {
    let res = truth.resolution;
    let d = to - from;
    let diagonal = ((d.x.abs() - res).abs() < 1e-9) && ((d.y.abs() - res).abs() < 1e-9);
    if !diagonal {
        return false;
    }
    let square = |c: Point| Rect::new(c - Point::new(res / 2.0, res / 2.0), c + Point::new(res / 2.0, res / 2.0));
    let a = square(Point::new(to.x, from.y));
    let b = square(Point::new(from.x, to.y));
    let hits = |rect: &Rect| {
        truth.polygons().any(|p| {
            inflate_covering(p, truth.robot_radius)
                .map(|q| rect_intersects_polygon(rect, &q))
                .unwrap_or(true)
        })
    };
    hits(&a) && hits(&b)
}

/// Executes one unit push. The robot must be at the contact pose of `act`
/// on the obstacle's true footprint.
pub fn apply_push(truth: &mut GroundTruth, act: &PushAction) -> Result<PushOutcome, ContractError> {
    let o = truth
        .obstacles
        .get(&act.obstacle_id)
        .ok_or_else(|| ContractError::UnknownObstacle(act.obstacle_id.clone()))?;
    let contact = q_for(&o.footprint, act, truth.robot_radius);
    let distance = contact.position.distance(truth.robot.position);
    if distance > CONTACT_TOLERANCE {
        return Err(ContractError::NotInContact { distance });
    }
    if !o.movable || o.push_failure {
        return Ok(PushOutcome::Failed);
    }
    let offset = act.direction * act.step;
    let others = truth
        .static_map
        .iter()
        .chain(truth.obstacles.values().filter(|t| t.id != act.obstacle_id).map(|t| &t.footprint));
    if crate::planner::push_blocked(others, truth.bounds, &o.footprint, truth.robot.position, truth.robot_radius, offset) {
        return Ok(PushOutcome::Blocked);
    }
    let moved = o.footprint.translated(offset);
    truth.obstacles.get_mut(&act.obstacle_id).expect("checked above").footprint = moved;
    truth.robot = Configuration::new(truth.robot.position + offset, truth.robot.heading);
    Ok(PushOutcome::Moved)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EventKind {
    Transit,
    Push,
    Sense,
    Replan,
    Invalidate,
    GoalReached,
    Failure,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MovedObstacle {
    pub id: ObstacleId,
    pub footprint: ConvexPolygon,
    /// Whether the footprint touches a taboo zone after this push.
    pub in_taboo: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepEvent {
    pub tick: u64,
    pub kind: EventKind,
    pub robot_pose: Configuration,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moved_obstacle: Option<MovedObstacle>,
    #[serde(default)]
    pub note: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub path_length: f64,
    pub pushes: usize,
    pub replans: usize,
    pub goals_reached: usize,
    pub taboo_violations: usize,
}

impl Metrics {
    /// Metrics derived from an event list.
    ///
    /// `path_length` sums robot displacement between consecutive events,
    /// `taboo_violations` counts obstacles whose last push left them in a
    /// taboo zone.
    pub fn from_events(events: &[StepEvent]) -> Self {
        let path_length = events
            .windows(2)
            .map(|w| w[0].robot_pose.position.distance(w[1].robot_pose.position))
            .sum();
        let count = |k: EventKind| events.iter().filter(|e| e.kind == k).count();
        let mut last_push: std::collections::BTreeMap<&str, bool> = Default::default();
        for e in events {
            if let (EventKind::Push, Some(m)) = (e.kind, &e.moved_obstacle) {
                last_push.insert(&m.id, m.in_taboo);
            }
        }
        Self {
            path_length,
            pushes: count(EventKind::Push),
            replans: count(EventKind::Replan),
            goals_reached: count(EventKind::GoalReached),
            taboo_violations: last_push.values().filter(|&&v| v).count(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExecutionTrace {
    pub events: Vec<StepEvent>,
    pub metrics: Metrics,
}

impl ExecutionTrace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends an event with the next tick and updates the metrics.
    pub fn record(&mut self, kind: EventKind, robot_pose: Configuration, moved_obstacle: Option<MovedObstacle>, note: impl Into<String>) {
        let tick = self.events.len() as u64;
        if let Some(prev) = self.events.last() {
            self.metrics.path_length += prev.robot_pose.position.distance(robot_pose.position);
        }
        match kind {
            EventKind::Push => self.metrics.pushes += 1,
            EventKind::Replan => self.metrics.replans += 1,
            EventKind::GoalReached => self.metrics.goals_reached += 1,
            _ => {}
        }
        let pushed = moved_obstacle.is_some();
        self.events.push(StepEvent {
            tick,
            kind,
            robot_pose,
            moved_obstacle,
            note: note.into(),
        });
        if pushed {
            self.metrics.taboo_violations = Metrics::from_events(&self.events).taboo_violations;
        }
    }

    /// Builds a trace from events, deriving the metrics.
    pub fn from_events(events: Vec<StepEvent>) -> Self {
        let metrics = Metrics::from_events(&events);
        Self { events, metrics }
    }

    pub fn metrics_consistent(&self) -> bool {
        Metrics::from_events(&self.events) == self.metrics
    }

    pub fn count(&self, kind: EventKind) -> usize {
        self.events.iter().filter(|e| e.kind == kind).count()
    }
}

pub(crate) fn in_taboo(taboo: &TabooLayer, footprint: &ConvexPolygon) -> bool {
    taboo.zones.iter().any(|z| intersects(z, footprint))
}
