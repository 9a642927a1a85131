//! Top-level planning and the plan-execute-sense loop.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::obstacle::make_plan_for_obstacle_in;
use super::push::push_blocked;
use super::{cost_of, CSpace, ComponentKind, Configuration, Observation, Plan, PushAction};
use crate::geometry::{ConvexPolygon, GeometryError, Point, EPS};
use crate::simulator::{apply_push, apply_transit, in_taboo, ContractError, EventKind, ExecutionTrace, MovedObstacle, PushOutcome, TransitOutcome};
use crate::world::{sense, GroundTruth, Mode, MovabilityState, World};

/// Replans in a row without executing a step before the goal is abandoned.
const MAX_IDLE_REPLANS: usize = 3;

/// Best plan from `q_r` to `q_goal` in knowledge `w`, or `None` if no plan
/// exists.
///
/// Starts from the best path avoiding every known obstacle, then tries to
/// improve on it by moving one obstacle. Candidates are visited in order of
/// their distance to the goal; an obstacle is skipped when even a straight
/// approach and a straight exit could not beat the current best.
pub fn make_plan(w: &World, q_r: Configuration, q_goal: Configuration) -> Result<Option<Plan>, GeometryError> {
    let cs = CSpace::of_world(w)?;
    let mut p_opt = cs.plan(q_r, q_goal, ComponentKind::C1).map(Plan::transit);
    let r = w.robot_radius;
    let mut queue: Vec<(f64, &str)> = w
        .obstacles
        .values()
        .filter(|o| o.movability != MovabilityState::Unmovable)
        .map(|o| (o.footprint.distance_to_point(q_goal.position), o.id.as_str()))
        .collect();
    queue.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(b.1)));
    for (to_goal, id) in queue {
        let to_robot = w.obstacles[id].footprint.distance_to_point(q_r.position);
        let lower_bound = (to_robot - r).max(0.0) + (to_goal - r).max(0.0);
        if lower_bound >= cost_of(p_opt.as_ref()) {
            continue;
        }
        if let Some(p) = make_plan_for_obstacle_in(w, q_r, q_goal, id, cost_of(p_opt.as_ref()), &cs)? {
            if p.cost() < cost_of(p_opt.as_ref()) {
                p_opt = Some(p);
            }
        }
    }
    Ok(p_opt)
}

#[derive(Debug, Error)]
pub enum ExecuteError {
    #[error("initial robot pose collides with the world")]
    InitialCollision,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("simulator contract violated: {0}")]
    Contract(#[from] ContractError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MissionOutcome {
    Reached,
    NoPlan,
    BudgetExhausted,
}

/// One executable unit of a plan.
#[derive(Clone, Debug)]
enum Step {
    Move {
        to: Configuration,
        note: &'static str,
    },
    Push {
        action: PushAction,
        before: ConvexPolygon,
        after: ConvexPolygon,
        robot_after: Configuration,
        index: usize,
        total: usize,
    },
}

fn flatten(plan: &Plan, w: &World) -> Vec<Step> {
    let detour = plan.target.as_ref().and_then(|t| t.observation) == Some(Observation::Detour);
    let mut steps = Vec::new();
    for comp in &plan.components {
        if comp.kind == ComponentKind::C2 {
            let target = plan.target.as_ref().expect("push plans have a target");
            let offset = target.action.direction * target.action.step;
            let mut fp = w.obstacles[&target.obstacle_id].footprint.clone();
            let total = comp.waypoints.len() - 1;
            for (k, q) in comp.waypoints.iter().enumerate().skip(1) {
                let after = fp.translated(offset);
                steps.push(Step::Push {
                    action: target.action.clone(),
                    before: fp,
                    after: after.clone(),
                    robot_after: *q,
                    index: k,
                    total,
                });
                fp = after;
            }
        } else {
            let note = match (comp.kind, detour) {
                (ComponentKind::C0, true) => "c0 detour",
                (ComponentKind::C0, false) => "c0",
                (ComponentKind::C1, _) => "c1",
                _ => "c3",
            };
            steps.extend(comp.waypoints.iter().skip(1).map(|&to| Step::Move { to, note }));
        }
    }
    steps
}

/// Checks the remaining steps against current knowledge.
fn validate(w: &World, rest: &[Step], target: Option<&str>) -> Result<(), String> {
    let r = w.robot_radius;
    let first_push = rest.iter().find_map(|s| match s {
        Step::Push { before, .. } => Some(before.clone()),
        Step::Move { .. } => None,
    });
    let (others, mut target_fp): (Vec<&ConvexPolygon>, Option<ConvexPolygon>) = match (target, first_push) {
        (Some(id), Some(before)) => {
            let known = &w.obstacles.get(id).ok_or("target vanished from knowledge")?.footprint;
            let diverged = known.len() != before.len()
                || known.vertices().iter().zip(before.vertices()).any(|(a, b)| a.distance(*b) > EPS);
            if diverged {
                return Err("target geometry diverged".into());
            }
            (w.polygons_except(id).collect(), Some(before))
        }
        _ => (w.polygons().collect(), None),
    };
    let mut robot = w.robot.position;
    for step in rest {
        match step {
            Step::Move { to, note } => {
                let hit = !w.disc_in_bounds(to.position)
                    || others
                        .iter()
                        .copied()
                        .chain(target_fp.as_ref())
                        .any(|p| p.overlaps_capsule(robot, to.position, r));
                if hit {
                    return Err(format!("collision ahead on {}", note.split(' ').next().unwrap_or(note)));
                }
                robot = to.position;
            }
            Step::Push {
                action,
                after,
                robot_after,
                ..
            } => {
                if w.obstacles.get(&action.obstacle_id).map(|o| o.movability) == Some(MovabilityState::Unmovable) {
                    return Err("target is unmovable".into());
                }
                let fp = target_fp.as_ref().expect("set when a push remains");
                if push_blocked(others.iter().copied(), w.bounds, fp, robot, r, action.direction * action.step) {
                    return Err("push would be blocked".into());
                }
                target_fp = Some(after.clone());
                robot = robot_after.position;
            }
        }
    }
    Ok(())
}

/// A robot pursuing goals in a simulated world. Knowledge and the trace
/// persist across goals.
#[derive(Clone, Debug)]
pub struct Mission {
    pub truth: GroundTruth,
    pub knowledge: World,
    pub trace: ExecutionTrace,
    budget: usize,
    steps: usize,
}

impl Mission {
    /// Starts a mission: checks the initial pose and records a first sensing.
    pub fn new(truth: GroundTruth, mode: Mode, budget: usize) -> Result<Self, ExecuteError> {
        let knowledge = truth.initial_knowledge(mode);
        Self::with_knowledge(truth, knowledge, budget)
    }

    pub fn with_knowledge(truth: GroundTruth, knowledge: World, budget: usize) -> Result<Self, ExecuteError> {
        if truth.disc_collides(truth.robot.position) {
            return Err(ExecuteError::InitialCollision);
        }
        let mut m = Self {
            truth,
            knowledge,
            trace: ExecutionTrace::new(),
            budget,
            steps: 0,
        };
        let note = m.update_knowledge().unwrap_or_default();
        m.trace.record(EventKind::Sense, m.truth.robot, None, format!("initial{}{note}", if note.is_empty() { "" } else { " " }));
        Ok(m)
    }

    pub fn steps_used(&self) -> usize {
        self.steps
    }

    /// Pursues every goal in order and returns one outcome per goal. Goals
    /// after an exhausted budget are not attempted.
    pub fn run(&mut self, goals: &[Point]) -> Result<Vec<MissionOutcome>, ExecuteError> {
        let mut out = Vec::new();
        for (k, &g) in goals.iter().enumerate() {
            if out.last() == Some(&MissionOutcome::BudgetExhausted) {
                out.push(MissionOutcome::BudgetExhausted);
                continue;
            }
            out.push(self.pursue(k, g)?);
        }
        Ok(out)
    }

    /// Plans, executes and replans until the robot stands on `goal`, no plan
    /// exists, or the step budget runs out.
    pub fn pursue(&mut self, goal_index: usize, goal: Point) -> Result<MissionOutcome, ExecuteError> {
        let here = self.truth.robot;
        let heading = if here.position.distance(goal) > EPS { (goal - here.position).angle() } else { here.heading };
        let q_goal = Configuration::new(goal, heading);
        let mut idle = 0;
        loop {
            if self.truth.robot.position.distance(goal) <= EPS {
                self.trace
                    .record(EventKind::GoalReached, self.truth.robot, None, format!("goal={goal_index}"));
                return Ok(MissionOutcome::Reached);
            }
            if self.steps >= self.budget {
                self.trace
                    .record(EventKind::Failure, self.truth.robot, None, format!("goal={goal_index} budget exhausted"));
                return Ok(MissionOutcome::BudgetExhausted);
            }
            idle += 1;
            if idle > MAX_IDLE_REPLANS {
                self.trace
                    .record(EventKind::Failure, self.truth.robot, None, format!("goal={goal_index} no progress"));
                return Ok(MissionOutcome::NoPlan);
            }
            let Some(plan) = make_plan(&self.knowledge, self.truth.robot, q_goal)? else {
                self.trace
                    .record(EventKind::Failure, self.truth.robot, None, format!("goal={goal_index} no plan"));
                return Ok(MissionOutcome::NoPlan);
            };
            self.trace.record(EventKind::Replan, self.truth.robot, None, replan_note(goal_index, &plan));
            let steps = flatten(&plan, &self.knowledge);
            let target = plan.target.as_ref().map(|t| t.obstacle_id.as_str());
            for (i, step) in steps.iter().enumerate() {
                if self.steps >= self.budget {
                    break;
                }
                self.steps += 1;
                idle = 0;
                if let Err(reason) = self.execute(step)? {
                    self.update_knowledge_and_record();
                    self.trace.record(EventKind::Invalidate, self.truth.robot, None, reason);
                    break;
                }
                if self.update_knowledge_and_record() {
                    if let Err(reason) = validate(&self.knowledge, &steps[i + 1..], target) {
                        self.trace.record(EventKind::Invalidate, self.truth.robot, None, reason);
                        break;
                    }
                }
            }
        }
    }

    /// Runs one step against the true world. `Ok(Err(reason))` means the
    /// step could not be carried out.
    fn execute(&mut self, step: &Step) -> Result<Result<(), String>, ExecuteError> {
        match step {
            Step::Move { to, note } => match apply_transit(&mut self.truth, *to)? {
                TransitOutcome::Moved => {
                    self.trace.record(EventKind::Transit, self.truth.robot, None, *note);
                    Ok(Ok(()))
                }
                TransitOutcome::Collision => Ok(Err("transit collision".into())),
            },
            Step::Push { action, index, total, .. } => {
                let id = &action.obstacle_id;
                let movable = self.knowledge.obstacle(id).map(|o| o.movability) == Some(MovabilityState::Movable);
                if !movable {
                    return Ok(Err(format!("{id} not known movable at push time")));
                }
                match apply_push(&mut self.truth, action)? {
                    PushOutcome::Moved => {
                        let footprint = self.truth.obstacles[id].footprint.clone();
                        let moved = MovedObstacle {
                            id: id.clone(),
                            in_taboo: in_taboo(&self.truth.taboo, &footprint),
                            footprint,
                        };
                        self.trace.record(
                            EventKind::Push,
                            self.truth.robot,
                            Some(moved),
                            format!("obstacle={id} side={} step={index}/{total}", action.side_index),
                        );
                        Ok(Ok(()))
                    }
                    PushOutcome::Blocked => Ok(Err(format!("push of {id} blocked"))),
                    PushOutcome::Failed => {
                        if let Some(o) = self.knowledge.obstacles.get_mut(id) {
                            o.movability = MovabilityState::Unmovable;
                        }
                        Ok(Err(format!("push of {id} failed, marked unmovable")))
                    }
                }
            }
        }
    }

    fn update_knowledge_and_record(&mut self) -> bool {
        match self.update_knowledge() {
            Some(note) => {
                self.trace.record(EventKind::Sense, self.truth.robot, None, note);
                true
            }
            None => false,
        }
    }

    /// Senses from the current pose. Returns a description of what changed,
    /// or `None` if knowledge is unchanged apart from the robot pose.
    fn update_knowledge(&mut self) -> Option<String> {
        let next = sense(&self.truth, &self.knowledge);
        let mut changes = Vec::new();
        for (id, o) in &next.obstacles {
            match self.knowledge.obstacles.get(id) {
                None => changes.push(format!("detected={id}:{}", state(o.movability))),
                Some(old) => {
                    if old.movability != o.movability {
                        changes.push(format!("identified={id}:{}", state(o.movability)));
                    }
                    if old.footprint != o.footprint {
                        changes.push(format!("moved={id}"));
                    }
                }
            }
        }
        self.knowledge = next;
        (!changes.is_empty()).then(|| changes.join(" "))
    }
}

fn state(m: MovabilityState) -> &'static str {
    match m {
        MovabilityState::Unknown => "unknown",
        MovabilityState::Movable => "movable",
        MovabilityState::Unmovable => "unmovable",
    }
}

fn replan_note(goal_index: usize, plan: &Plan) -> String {
    match &plan.target {
        None => format!("goal={goal_index} cost={:.3} target=none", plan.cost()),
        Some(t) => format!(
            "goal={goal_index} cost={:.3} target={} side={} count={} observation={}",
            plan.cost(),
            t.obstacle_id,
            t.action.side_index,
            t.push_count,
            t.observation.map_or("none", Observation::label)
        ),
    }
}

/// Runs one goal from the truth's robot pose with the given starting
/// knowledge and returns the trace.
pub fn make_and_execute_plan(
    truth: GroundTruth,
    w: World,
    q_goal: Configuration,
    budget: usize,
) -> Result<(ExecutionTrace, MissionOutcome), ExecuteError> {
    let mut m = Mission::with_knowledge(truth, w, budget)?;
    let outcome = m.pursue(0, q_goal.position)?;
    Ok((m.trace, outcome))
}
