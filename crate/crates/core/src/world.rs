//! Robot knowledge and ground truth.
//!
//! [`World`] is what the robot believes: the static map (always complete),
//! every obstacle it has detected with its last observed footprint, and the
//! three-state movability of each. [`GroundTruth`] is the simulator's view of
//! the same environment. [`sense`] moves information from the latter to the
//! former through two nested conical sensors.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{contains_polygon, intersects, ConeSector, ConvexPolygon, Point, Rect};
use crate::planner::Configuration;

pub type ObstacleId = String;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MovabilityState {
    Unknown,
    Movable,
    Unmovable,
}

/// Planner behavior: plain NAMO baseline or the socially-aware extension.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Every detected obstacle is presumed movable until a push fails; taboo
    /// zones are ignored while planning.
    Namo,
    /// Whitelist-based movability with observation before manipulation, and
    /// taboo-gated obstacle placement.
    #[default]
    Snamo,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Namo => "namo",
            Mode::Snamo => "snamo",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "namo" => Ok(Mode::Namo),
            "snamo" => Ok(Mode::Snamo),
            other => Err(format!("unknown mode `{other}` (expected `namo` or `snamo`)")),
        }
    }
}

/// An obstacle as known by the robot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Obstacle {
    pub id: ObstacleId,
    pub footprint: ConvexPolygon,
    pub movability: MovabilityState,
    /// Known once the semantic sensor has identified the obstacle.
    pub class_label: Option<String>,
}

pub fn is_movable(o: &Obstacle) -> bool {
    o.movability == MovabilityState::Movable
}

pub fn is_unknown(o: &Obstacle) -> bool {
    o.movability == MovabilityState::Unknown
}

/// Social placement layer: polygons where no moved obstacle may rest.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TabooLayer {
    pub zones: Vec<ConvexPolygon>,
}

impl TabooLayer {
    pub fn new(zones: Vec<ConvexPolygon>) -> Self {
        Self { zones }
    }

    pub fn is_empty(&self) -> bool {
        self.zones.is_empty()
    }

    /// True if `footprint` touches any zone.
    pub fn intersects(&self, footprint: &ConvexPolygon) -> bool {
        self.zones.iter().any(|z| intersects(z, footprint))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SensorError {
    #[error("sensor {0} must be positive and finite")]
    NonPositive(&'static str),
    #[error("half angles must lie in (0, π]")]
    HalfAngle,
    #[error("geometric field of view must strictly contain the semantic one")]
    NotNested,
    #[error("observation distances must satisfy 0 < obs_min < obs_max <= s_range")]
    ObservationBand,
}

/// Two concentric conical sensors anchored at the robot: the geometric one
/// detects and segments, the semantic one identifies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SensorModel {
    pub g_range: f64,
    pub g_half_angle: f64,
    pub s_range: f64,
    pub s_half_angle: f64,
    pub obs_min: f64,
    pub obs_max: f64,
}

impl Default for SensorModel {
    fn default() -> Self {
        Self {
            g_range: 5.0,
            g_half_angle: 2.0 * PI / 3.0,
            s_range: 3.0,
            s_half_angle: PI / 6.0,
            obs_min: 0.5,
            obs_max: 3.0,
        }
    }
}

impl SensorModel {
    pub fn validate(&self) -> Result<(), SensorError> {
        for (name, v) in [
            ("g_range", self.g_range),
            ("s_range", self.s_range),
            ("obs_min", self.obs_min),
            ("obs_max", self.obs_max),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(SensorError::NonPositive(name));
            }
        }
        for a in [self.g_half_angle, self.s_half_angle] {
            if !(a > 0.0 && a <= PI) {
                return Err(SensorError::HalfAngle);
            }
        }
        let nested = self.g_range >= self.s_range
            && self.g_half_angle >= self.s_half_angle
            && (self.g_range > self.s_range || self.g_half_angle > self.s_half_angle);
        if !nested {
            return Err(SensorError::NotNested);
        }
        if !(self.obs_min < self.obs_max && self.obs_max <= self.s_range) {
            return Err(SensorError::ObservationBand);
        }
        Ok(())
    }

    pub fn g_fov(&self, pose: Configuration) -> ConeSector {
        ConeSector::new(pose.position, pose.heading, self.g_half_angle, self.g_range)
    }

    pub fn s_fov(&self, pose: Configuration) -> ConeSector {
        ConeSector::new(pose.position, pose.heading, self.s_half_angle, self.s_range)
    }

    /// Whether `footprint` fits entirely inside the semantic field of view
    /// from some pose. Sampled over 32 bearings and distances in steps of
    /// 2.5 cm up to the sensor range.
    pub fn can_identify(&self, footprint: &ConvexPolygon) -> bool {
        let c = footprint.centroid();
        let steps = (self.s_range / 0.025).ceil() as usize;
        (0..32).any(|k| {
            let bearing = 2.0 * PI * k as f64 / 32.0;
            let dir = Point::from_angle(bearing);
            (0..=steps).any(|s| {
                let d = s as f64 * 0.025;
                let pose = Configuration::new(c + dir * d, bearing + PI);
                contains_polygon(&self.s_fov(pose), footprint)
            })
        })
    }
}

/// The robot's knowledge of its environment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct World {
    pub bounds: Rect,
    /// Walls and other fixed structure, known in full from the start.
    pub static_map: Vec<ConvexPolygon>,
    pub obstacles: BTreeMap<ObstacleId, Obstacle>,
    pub taboo: TabooLayer,
    pub robot: Configuration,
    pub robot_radius: f64,
    pub whitelist: BTreeSet<String>,
    pub sensor: SensorModel,
    pub resolution: f64,
    pub unit_push: f64,
    pub mode: Mode,
}

impl World {
    pub fn obstacle(&self, id: &str) -> Option<&Obstacle> {
        self.obstacles.get(id)
    }

    /// Every known polygon: static structure first, then obstacles by id.
    pub fn polygons(&self) -> impl Iterator<Item = &ConvexPolygon> {
        self.static_map.iter().chain(self.obstacles.values().map(|o| &o.footprint))
    }

    /// Known polygons other than obstacle `skip`.
    pub fn polygons_except<'a>(&'a self, skip: &'a str) -> impl Iterator<Item = &'a ConvexPolygon> + 'a {
        self.static_map.iter().chain(
            self.obstacles
                .values()
                .filter(move |o| o.id != skip)
                .map(|o| &o.footprint),
        )
    }

    /// True if the robot disc at `p` overlaps any known polygon interior or
    /// leaves the bounds.
    pub fn disc_collides(&self, p: Point) -> bool {
        !self.disc_in_bounds(p) || self.polygons().any(|poly| poly.overlaps_disc(p, self.robot_radius))
    }

    pub fn disc_in_bounds(&self, p: Point) -> bool {
        let r = self.robot_radius;
        p.x - r >= self.bounds.min.x - 1e-9
            && p.x + r <= self.bounds.max.x + 1e-9
            && p.y - r >= self.bounds.min.y - 1e-9
            && p.y + r <= self.bounds.max.y + 1e-9
    }

    pub fn taboo_gating(&self) -> bool {
        self.mode == Mode::Snamo
    }
}

/// `false` iff `footprint` touches any taboo zone of `w`.
pub fn not_in_taboo(w: &World, footprint: &ConvexPolygon) -> bool {
    !w.taboo.intersects(footprint)
}

/// A ground-truth obstacle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruthObstacle {
    pub id: ObstacleId,
    pub class_label: String,
    pub footprint: ConvexPolygon,
    /// Physically movable at all.
    pub movable: bool,
    /// Scripted manipulation failure: every push on it fails.
    pub push_failure: bool,
}

/// The simulator's complete world.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub bounds: Rect,
    pub static_map: Vec<ConvexPolygon>,
    pub obstacles: BTreeMap<ObstacleId, TruthObstacle>,
    pub taboo: TabooLayer,
    pub robot: Configuration,
    pub robot_radius: f64,
    pub whitelist: BTreeSet<String>,
    pub sensor: SensorModel,
    pub resolution: f64,
    pub unit_push: f64,
}

impl GroundTruth {
    /// Initial knowledge: static map, taboo layer and robot pose, no obstacles.
    pub fn initial_knowledge(&self, mode: Mode) -> World {
        World {
            bounds: self.bounds,
            static_map: self.static_map.clone(),
            obstacles: BTreeMap::new(),
            taboo: self.taboo.clone(),
            robot: self.robot,
            robot_radius: self.robot_radius,
            whitelist: self.whitelist.clone(),
            sensor: self.sensor,
            resolution: self.resolution,
            unit_push: self.unit_push,
            mode,
        }
    }

    pub fn polygons(&self) -> impl Iterator<Item = &ConvexPolygon> {
        self.static_map.iter().chain(self.obstacles.values().map(|o| &o.footprint))
    }

    pub fn disc_in_bounds(&self, p: Point) -> bool {
        let r = self.robot_radius;
        p.x - r >= self.bounds.min.x - 1e-9
            && p.x + r <= self.bounds.max.x + 1e-9
            && p.y - r >= self.bounds.min.y - 1e-9
            && p.y + r <= self.bounds.max.y + 1e-9
    }

    pub fn disc_collides(&self, p: Point) -> bool {
        !self.disc_in_bounds(p) || self.polygons().any(|poly| poly.overlaps_disc(p, self.robot_radius))
    }

    pub fn is_whitelisted(&self, id: &str) -> bool {
        self.obstacles
            .get(id)
            .is_some_and(|o| self.whitelist.contains(&o.class_label))
    }
}

/// Knowledge update from one sensing step at the robot's current pose.
///
/// Obstacles touching the geometric field of view are (re)recorded with
/// their exact footprint. Obstacles entirely inside the semantic field of
/// view get their movability resolved against the whitelist. Movability is
/// never downgraded back to unknown.
pub fn sense(truth: &GroundTruth, knowledge: &World) -> World {
    let mut next = knowledge.clone();
    next.robot = truth.robot;
    let g_fov = truth.sensor.g_fov(truth.robot);
    let s_fov = truth.sensor.s_fov(truth.robot);
    for (id, t) in &truth.obstacles {
        if !g_fov.intersects_polygon(&t.footprint) {
            continue;
        }
        let entry = next.obstacles.entry(id.clone()).or_insert_with(|| {
            let movability = match knowledge.mode {
                Mode::Namo => MovabilityState::Movable,
                Mode::Snamo if !truth.sensor.can_identify(&t.footprint) => MovabilityState::Unmovable,
                Mode::Snamo => MovabilityState::Unknown,
            };
            Obstacle {
                id: id.clone(),
                footprint: t.footprint.clone(),
                movability,
                class_label: None,
            }
        });
        entry.footprint = t.footprint.clone();
        if contains_polygon(&s_fov, &t.footprint) {
            entry.class_label = Some(t.class_label.clone());
            if entry.movability == MovabilityState::Unknown {
                entry.movability = if knowledge.whitelist.contains(&t.class_label) {
                    MovabilityState::Movable
                } else {
                    MovabilityState::Unmovable
                };
            }
        }
    }
    next
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn open_truth() -> GroundTruth {
        GroundTruth {
            bounds: Rect::new(Point::new(0.0, 0.0), Point::new(10.0, 10.0)),
            static_map: vec![],
            obstacles: BTreeMap::new(),
            taboo: TabooLayer::default(),
            robot: Configuration::new(Point::new(1.0, 5.0), 0.0),
            robot_radius: 0.3,
            whitelist: ["box".to_string()].into_iter().collect(),
            sensor: SensorModel::default(),
            resolution: 0.05,
            unit_push: 0.1,
        }
    }

    fn add(truth: &mut GroundTruth, id: &str, class: &str, poly: ConvexPolygon) {
        truth.obstacles.insert(
            id.into(),
            TruthObstacle {
                id: id.into(),
                class_label: class.into(),
                footprint: poly,
                movable: true,
                push_failure: false,
            },
        );
    }

    #[test]
    fn default_sensor_is_valid() {
        SensorModel::default().validate().unwrap();
        let mut bad = SensorModel::default();
        bad.s_range = bad.g_range;
        bad.s_half_angle = bad.g_half_angle;
        assert_eq!(bad.validate(), Err(SensorError::NotNested));
        let mut bad = SensorModel::default();
        bad.obs_max = bad.s_range + 1.0;
        assert_eq!(bad.validate(), Err(SensorError::ObservationBand));
    }

    #[test]
    fn sensing_three_cases() {
        let mut truth = open_truth();
        // behind the robot, out of every field of view
        add(&mut truth, "hidden", "box", ConvexPolygon::rectangle(0.0, 4.8, 0.4, 5.2).unwrap());
        // ahead and small: identified
        add(&mut truth, "near", "box", ConvexPolygon::rectangle(2.5, 4.8, 2.9, 5.2).unwrap());
        // inside the geometric cone but off the semantic axis
        add(&mut truth, "side", "chair", ConvexPolygon::rectangle(1.5, 7.0, 1.9, 7.4).unwrap());
        let w = sense(&truth, &truth.initial_knowledge(Mode::Snamo));
        assert!(w.obstacle("hidden").is_none());
        let near = w.obstacle("near").unwrap();
        assert!(is_movable(near) && !is_unknown(near));
        let side = w.obstacle("side").unwrap();
        assert!(is_unknown(side) && !is_movable(side));
        assert_eq!(side.class_label, None);
    }

    #[test]
    fn non_whitelisted_becomes_unmovable_and_stays() {
        let mut truth = open_truth();
        add(&mut truth, "c", "chair", ConvexPolygon::rectangle(2.5, 4.8, 2.9, 5.2).unwrap());
        let w = sense(&truth, &truth.initial_knowledge(Mode::Snamo));
        assert_eq!(w.obstacle("c").unwrap().movability, MovabilityState::Unmovable);
        truth.robot = Configuration::new(Point::new(1.0, 5.0), PI);
        let w2 = sense(&truth, &w);
        assert_eq!(w2.obstacle("c").unwrap().movability, MovabilityState::Unmovable);
    }

    #[test]
    fn oversized_obstacle_is_unmovable_on_detection() {
        let mut truth = open_truth();
        // wider than the semantic cone at any distance within range
        add(&mut truth, "wall-ish", "box", ConvexPolygon::rectangle(3.0, 1.0, 3.5, 9.0).unwrap());
        let w = sense(&truth, &truth.initial_knowledge(Mode::Snamo));
        assert_eq!(w.obstacle("wall-ish").unwrap().movability, MovabilityState::Unmovable);
    }

    #[test]
    fn namo_mode_presumes_movable() {
        let mut truth = open_truth();
        add(&mut truth, "c", "chair", ConvexPolygon::rectangle(1.5, 7.0, 1.9, 7.4).unwrap());
        let w = sense(&truth, &truth.initial_knowledge(Mode::Namo));
        assert!(is_movable(w.obstacle("c").unwrap()));
    }

    #[test]
    fn taboo_gate() {
        let truth = open_truth();
        let mut w = truth.initial_knowledge(Mode::Snamo);
        let fp = ConvexPolygon::rectangle(1.0, 1.0, 2.0, 2.0).unwrap();
        assert!(not_in_taboo(&w, &fp));
        w.taboo = TabooLayer::new(vec![ConvexPolygon::rectangle(0.0, 0.0, 5.0, 5.0).unwrap()]);
        assert!(!not_in_taboo(&w, &fp));
        w.taboo = TabooLayer::new(vec![ConvexPolygon::rectangle(2.0, 0.0, 3.0, 3.0).unwrap()]);
        assert!(!not_in_taboo(&w, &fp));
        w.taboo = TabooLayer::new(vec![ConvexPolygon::rectangle(2.001, 0.0, 3.0, 3.0).unwrap()]);
        assert!(not_in_taboo(&w, &fp));
    }
}
