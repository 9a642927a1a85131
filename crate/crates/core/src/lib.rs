//! Socially-aware navigation among movable obstacles in the plane.
//!
//! A disc robot plans paths through a polygonal world and may push convex
//! obstacles out of its way. Which obstacles may be pushed is decided by a
//! whitelist of object classes, checked with a semantic sensor before any
//! contact; where they may come to rest is restricted by taboo zones.
//!
//! * [`geometry`]: polygons, offsets, sensor cones, grids.
//! * [`world`]: robot knowledge, ground truth and sensing.
//! * [`planner`]: grid search, push planning, observation planning, and the
//!   plan-execute-replan loop.
//! * [`simulator`]: ground-truth stepping and execution traces.
//! * [`scenario`]: scenario files, trace files and SVG frames.
//! * [`cli`]: the `run` and `compare` commands.

pub mod cli;
pub mod geometry;
pub mod planner;
pub mod scenario;
pub mod simulator;
pub mod world;

pub use geometry::{ConvexPolygon, Point};
pub use planner::{Configuration, Mission, MissionOutcome, Plan};
pub use scenario::{load_scenario, ScenarioSpec};
pub use simulator::{ExecutionTrace, Metrics};
pub use world::{GroundTruth, Mode, World};
