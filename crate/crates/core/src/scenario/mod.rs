//! Scenario files, trace files and SVG frames.
//!
//! Scenarios are TOML documents with `schema_version = 1`. Lengths are in
//! meters, angles in radians. See `SCHEMA.md` at the repository root.

mod render;
mod trace;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{ConvexPolygon, GeometryError, Point, Rect};
use crate::planner::Configuration;
use crate::world::{GroundTruth, Mode, SensorModel, TabooLayer, TruthObstacle};

pub use render::{render_frame, render_frames};
pub use trace::{read_trace, trace_to_string, write_trace};

pub const SCHEMA_VERSION: u32 = 1;

pub const DEFAULT_RADIUS: f64 = 0.3;
pub const DEFAULT_RESOLUTION: f64 = 0.05;
pub const DEFAULT_UNIT_PUSH: f64 = 0.1;
pub const DEFAULT_STEP_BUDGET: usize = 20_000;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: parse error: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{field}: {message}")]
    Validation { field: String, message: String },
    #[error("cannot serialize: {0}")]
    Serialize(String),
}

impl ScenarioError {
    fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        ScenarioError::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        ScenarioError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// An obstacle as placed in the true world.
#[derive(Clone, Debug, PartialEq)]
pub struct ObstacleSpec {
    pub id: String,
    pub class_label: String,
    pub footprint: ConvexPolygon,
    pub movable: bool,
    pub push_failure: bool,
}

/// A validated scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioSpec {
    pub name: String,
    pub bounds: Rect,
    pub static_map: Vec<ConvexPolygon>,
    pub obstacles: Vec<ObstacleSpec>,
    pub whitelist: BTreeSet<String>,
    pub taboo_zones: Vec<ConvexPolygon>,
    pub start: Configuration,
    pub radius: f64,
    /// Visited in order; nonempty.
    pub goals: Vec<Point>,
    pub sensor: SensorModel,
    pub resolution: f64,
    pub unit_push: f64,
    pub mode: Mode,
    pub step_budget: usize,
}

impl ScenarioSpec {
    /// The simulator's world at the start of a run.
    pub fn ground_truth(&self) -> GroundTruth {
        GroundTruth {
            bounds: self.bounds,
            static_map: self.static_map.clone(),
            obstacles: self
                .obstacles
                .iter()
                .map(|o| {
                    let t = TruthObstacle {
                        id: o.id.clone(),
                        class_label: o.class_label.clone(),
                        footprint: o.footprint.clone(),
                        movable: o.movable,
                        push_failure: o.push_failure,
                    };
                    (o.id.clone(), t)
                })
                .collect::<BTreeMap<_, _>>(),
            taboo: TabooLayer::new(self.taboo_zones.clone()),
            robot: self.start,
            robot_radius: self.radius,
            whitelist: self.whitelist.clone(),
            sensor: self.sensor,
            resolution: self.resolution,
            unit_push: self.unit_push,
        }
    }

    pub fn obstacle(&self, id: &str) -> Option<&ObstacleSpec> {
        self.obstacles.iter().find(|o| o.id == id)
    }

    /// Parses and validates TOML text.
    pub fn from_toml(text: &str) -> Result<Self, ScenarioError> {
        let raw: RawScenario = toml::from_str(text).map_err(|e| ScenarioError::Parse {
            path: PathBuf::from("<string>"),
            message: e.message().to_string(),
        })?;
        raw.validate()
    }

    /// Canonical TOML text: polygons written as vertex lists, every field
    /// explicit.
    pub fn to_toml(&self) -> Result<String, ScenarioError> {
        toml::to_string(&RawScenario::from(self)).map_err(|e| ScenarioError::Serialize(e.to_string()))
    }
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<ScenarioSpec, ScenarioError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| ScenarioError::io(path, e))?;
    let raw: RawScenario = toml::from_str(&text).map_err(|e| ScenarioError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    raw.validate()
}

pub fn save_scenario(spec: &ScenarioSpec, path: impl AsRef<Path>) -> Result<(), ScenarioError> {
    let path = path.as_ref();
    fs::write(path, spec.to_toml()?).map_err(|e| ScenarioError::io(path, e))
}

fn default_version() -> u32 {
    SCHEMA_VERSION
}

fn default_name() -> String {
    "scenario".into()
}

fn default_radius() -> f64 {
    DEFAULT_RADIUS
}

fn default_budget() -> usize {
    DEFAULT_STEP_BUDGET
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPolygon {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<[f64; 2]>>,
    /// `[x0, y0, x1, y1]`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rect: Option<[f64; 4]>,
}

impl RawPolygon {
    fn from_polygon(p: &ConvexPolygon) -> Self {
        RawPolygon {
            vertices: Some(p.vertices().iter().map(|v| [v.x, v.y]).collect()),
            rect: None,
        }
    }

    fn build(&self, field: &str) -> Result<ConvexPolygon, ScenarioError> {
        let built = match (&self.vertices, &self.rect) {
            (Some(v), None) => ConvexPolygon::new(v.iter().map(|p| Point::new(p[0], p[1])).collect()),
            (None, Some([x0, y0, x1, y1])) => {
                if !(x0 < x1 && y0 < y1) {
                    return Err(ScenarioError::invalid(format!("{field}.rect"), "expected x0 < x1 and y0 < y1"));
                }
                ConvexPolygon::rectangle(*x0, *y0, *x1, *y1)
            }
            _ => return Err(ScenarioError::invalid(field, "give exactly one of `vertices` or `rect`")),
        };
        built.map_err(|e: GeometryError| ScenarioError::invalid(field, e.to_string()))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawObstacle {
    id: String,
    class_label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rect: Option<[f64; 4]>,
    #[serde(default = "default_true")]
    movable: bool,
    #[serde(default)]
    push_failure: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPose {
    x: f64,
    y: f64,
    #[serde(default)]
    theta: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRobot {
    start: RawPose,
    #[serde(default = "default_radius")]
    radius: f64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawGrid {
    resolution: f64,
    unit_push: f64,
}

impl Default for RawGrid {
    fn default() -> Self {
        RawGrid {
            resolution: DEFAULT_RESOLUTION,
            unit_push: DEFAULT_UNIT_PUSH,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBounds {
    min: [f64; 2],
    max: [f64; 2],
}

/// On-disk layout. Tables come last so the serializer can emit them.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    #[serde(default = "default_version")]
    schema_version: u32,
    #[serde(default = "default_name")]
    name: String,
    #[serde(default)]
    mode: Mode,
    #[serde(default = "default_budget")]
    step_budget: usize,
    #[serde(default)]
    whitelist: Vec<String>,
    goals: Vec<[f64; 2]>,
    bounds: RawBounds,
    robot: RawRobot,
    #[serde(default)]
    grid: RawGrid,
    #[serde(default)]
    sensor: RawSensor,
    #[serde(default)]
    static_map: Vec<RawPolygon>,
    #[serde(default)]
    taboo_zones: Vec<RawPolygon>,
    #[serde(default)]
    obstacles: Vec<RawObstacle>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawSensor {
    g_range: f64,
    g_half_angle: f64,
    s_range: f64,
    s_half_angle: f64,
    obs_min: f64,
    obs_max: f64,
}

impl Default for RawSensor {
    fn default() -> Self {
        SensorModel::default().into()
    }
}

impl From<SensorModel> for RawSensor {
    fn from(s: SensorModel) -> Self {
        RawSensor {
            g_range: s.g_range,
            g_half_angle: s.g_half_angle,
            s_range: s.s_range,
            s_half_angle: s.s_half_angle,
            obs_min: s.obs_min,
            obs_max: s.obs_max,
        }
    }
}

impl From<RawSensor> for SensorModel {
    fn from(s: RawSensor) -> Self {
        SensorModel {
            g_range: s.g_range,
            g_half_angle: s.g_half_angle,
            s_range: s.s_range,
            s_half_angle: s.s_half_angle,
            obs_min: s.obs_min,
            obs_max: s.obs_max,
        }
    }
}

impl From<&ScenarioSpec> for RawScenario {
    fn from(s: &ScenarioSpec) -> Self {
        RawScenario {
            schema_version: SCHEMA_VERSION,
            name: s.name.clone(),
            mode: s.mode,
            step_budget: s.step_budget,
            whitelist: s.whitelist.iter().cloned().collect(),
            goals: s.goals.iter().map(|g| [g.x, g.y]).collect(),
            bounds: RawBounds {
                min: [s.bounds.min.x, s.bounds.min.y],
                max: [s.bounds.max.x, s.bounds.max.y],
            },
            robot: RawRobot {
                start: RawPose {
                    x: s.start.position.x,
                    y: s.start.position.y,
                    theta: s.start.heading,
                },
                radius: s.radius,
            },
            grid: RawGrid {
                resolution: s.resolution,
                unit_push: s.unit_push,
            },
            sensor: s.sensor.into(),
            static_map: s.static_map.iter().map(RawPolygon::from_polygon).collect(),
            taboo_zones: s.taboo_zones.iter().map(RawPolygon::from_polygon).collect(),
            obstacles: s
                .obstacles
                .iter()
                .map(|o| RawObstacle {
                    id: o.id.clone(),
                    class_label: o.class_label.clone(),
                    vertices: RawPolygon::from_polygon(&o.footprint).vertices,
                    rect: None,
                    movable: o.movable,
                    push_failure: o.push_failure,
                })
                .collect(),
        }
    }
}

fn positive(field: &str, v: f64) -> Result<f64, ScenarioError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(ScenarioError::invalid(field, format!("must be positive and finite, got {v}")))
    }
}

fn inside(bounds: &Rect, poly: &ConvexPolygon, field: &str) -> Result<(), ScenarioError> {
    match poly.vertices().iter().find(|v| !bounds.contains(**v)) {
        Some(v) => Err(ScenarioError::invalid(field, format!("vertex ({}, {}) lies outside the bounds", v.x, v.y))),
        None => Ok(()),
    }
}

impl RawScenario {
    fn validate(self) -> Result<ScenarioSpec, ScenarioError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(ScenarioError::invalid(
                "schema_version",
                format!("unsupported version {} (expected {SCHEMA_VERSION})", self.schema_version),
            ));
        }
        let [x0, y0] = self.bounds.min;
        let [x1, y1] = self.bounds.max;
        if ![x0, y0, x1, y1].iter().all(|v| v.is_finite()) || !(x0 < x1 && y0 < y1) {
            return Err(ScenarioError::invalid("bounds", "expected finite min < max on both axes"));
        }
        let bounds = Rect::new(Point::new(x0, y0), Point::new(x1, y1));

        let mut static_map = Vec::new();
        for (k, p) in self.static_map.iter().enumerate() {
            let field = format!("static_map[{k}]");
            let poly = p.build(&field)?;
            inside(&bounds, &poly, &field)?;
            static_map.push(poly);
        }
        let mut taboo_zones = Vec::new();
        for (k, p) in self.taboo_zones.iter().enumerate() {
            let field = format!("taboo_zones[{k}]");
            let poly = p.build(&field)?;
            inside(&bounds, &poly, &field)?;
            taboo_zones.push(poly);
        }
        let mut ids = BTreeSet::new();
        let mut obstacles = Vec::new();
        for (k, o) in self.obstacles.into_iter().enumerate() {
            let field = format!("obstacles[{k}] (id `{}`)", o.id);
            if o.id.is_empty() {
                return Err(ScenarioError::invalid(format!("obstacles[{k}].id"), "must not be empty"));
            }
            if !ids.insert(o.id.clone()) {
                return Err(ScenarioError::invalid(field, "duplicate id"));
            }
            let shape = RawPolygon {
                vertices: o.vertices,
                rect: o.rect,
            };
            let footprint = shape.build(&field)?;
            inside(&bounds, &footprint, &field)?;
            obstacles.push(ObstacleSpec {
                id: o.id,
                class_label: o.class_label,
                footprint,
                movable: o.movable,
                push_failure: o.push_failure,
            });
        }

        let radius = positive("robot.radius", self.robot.radius)?;
        let resolution = positive("grid.resolution", self.grid.resolution)?;
        let unit_push = positive("grid.unit_push", self.grid.unit_push)?;
        let sensor: SensorModel = self.sensor.into();
        sensor
            .validate()
            .map_err(|e| ScenarioError::invalid("sensor", e.to_string()))?;
        if self.step_budget == 0 {
            return Err(ScenarioError::invalid("step_budget", "must be at least 1"));
        }
        if self.goals.is_empty() {
            return Err(ScenarioError::invalid("goals", "at least one goal is required"));
        }
        let goals: Vec<Point> = self.goals.iter().map(|g| Point::new(g[0], g[1])).collect();
        for (k, g) in goals.iter().enumerate() {
            if !g.is_finite() || !bounds.contains(*g) {
                return Err(ScenarioError::invalid(format!("goals[{k}]"), "goal lies outside the bounds"));
            }
        }
        let RawPose { x, y, theta } = self.robot.start;
        if ![x, y, theta].iter().all(|v| v.is_finite()) {
            return Err(ScenarioError::invalid("robot.start", "coordinates must be finite"));
        }
        let spec = ScenarioSpec {
            name: self.name,
            bounds,
            static_map,
            obstacles,
            whitelist: self.whitelist.into_iter().collect(),
            taboo_zones,
            start: Configuration::new(Point::new(x, y), theta),
            radius,
            goals,
            sensor,
            resolution,
            unit_push,
            mode: self.mode,
            step_budget: self.step_budget,
        };
        if spec.ground_truth().disc_collides(spec.start.position) {
            return Err(ScenarioError::invalid("robot.start", "the robot disc collides or leaves the bounds"));
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
goals = [[4.0, 1.0]]

[bounds]
min = [0.0, 0.0]
max = [5.0, 2.0]

[robot]
start = { x = 1.0, y = 1.0 }
"#;

    #[test]
    fn minimal_file_gets_defaults() {
        let s = ScenarioSpec::from_toml(MINIMAL).unwrap();
        assert_eq!(s.mode, Mode::Snamo);
        assert_eq!(s.radius, DEFAULT_RADIUS);
        assert_eq!(s.resolution, DEFAULT_RESOLUTION);
        assert_eq!(s.unit_push, DEFAULT_UNIT_PUSH);
        assert_eq!(s.sensor, SensorModel::default());
        assert_eq!(s.step_budget, DEFAULT_STEP_BUDGET);
        assert!(s.obstacles.is_empty());
        assert_eq!(s.goals, vec![Point::new(4.0, 1.0)]);
    }

    #[test]
    fn obstacle_outside_bounds_names_the_id() {
        let text = format!(
            "{MINIMAL}\n[[obstacles]]\nid = \"crate7\"\nclass_label = \"box\"\nrect = [4.5, 0.5, 5.5, 1.5]\n"
        );
        let err = ScenarioSpec::from_toml(&text).unwrap_err();
        match &err {
            ScenarioError::Validation { field, .. } => assert!(field.contains("crate7"), "{field}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_and_validation_errors_are_distinct() {
        assert!(matches!(ScenarioSpec::from_toml("goals = ["), Err(ScenarioError::Parse { .. })));
        let no_goal = MINIMAL.replace("goals = [[4.0, 1.0]]", "goals = []");
        assert!(matches!(
            ScenarioSpec::from_toml(&no_goal),
            Err(ScenarioError::Validation { ref field, .. }) if field == "goals"
        ));
        let blocked = format!("{MINIMAL}\n[[static_map]]\nrect = [0.8, 0.8, 1.2, 1.2]\n");
        assert!(matches!(
            ScenarioSpec::from_toml(&blocked),
            Err(ScenarioError::Validation { ref field, .. }) if field == "robot.start"
        ));
        let typo = format!("{MINIMAL}\n[grid]\nresolutoin = 0.1\nunit_push = 0.1\n");
        assert!(matches!(ScenarioSpec::from_toml(&typo), Err(ScenarioError::Parse { .. })));
    }

    #[test]
    fn canonical_text_round_trips() {
        let text = format!(
            "{MINIMAL}\n[[obstacles]]\nid = \"b\"\nclass_label = \"box\"\nvertices = [[2.0, 0.5], [2.6, 0.5], [2.3, 1.1]]\npush_failure = true\n\n[[taboo_zones]]\nrect = [3.0, 0.0, 3.5, 2.0]\n"
        );
        let s = ScenarioSpec::from_toml(&text).unwrap();
        let again = ScenarioSpec::from_toml(&s.to_toml().unwrap()).unwrap();
        assert_eq!(s, again);
    }
}
