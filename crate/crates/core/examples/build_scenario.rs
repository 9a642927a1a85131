//! Builds a scenario in code, saves it as TOML, reloads it and runs the
//! mission loop on it.
//!
//! `cargo run --example build_scenario`

use std::collections::BTreeSet;

use snamo::geometry::{ConvexPolygon, Point, Rect};
use snamo::scenario::{load_scenario, save_scenario, ObstacleSpec, DEFAULT_RADIUS, DEFAULT_RESOLUTION, DEFAULT_STEP_BUDGET, DEFAULT_UNIT_PUSH};
use snamo::world::SensorModel;
use snamo::{Configuration, Mission, Mode, ScenarioSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = ScenarioSpec {
        name: "built".into(),
        bounds: Rect::new(Point::new(0.0, 0.0), Point::new(6.0, 3.0)),
        static_map: vec![ConvexPolygon::rectangle(2.9, 0.0, 3.1, 1.0)?, ConvexPolygon::rectangle(2.9, 2.0, 3.1, 3.0)?],
        obstacles: vec![ObstacleSpec {
            id: "crate".into(),
            class_label: "box".into(),
            footprint: ConvexPolygon::rectangle(2.7, 1.05, 3.3, 1.95)?,
            movable: true,
            push_failure: false,
        }],
        whitelist: BTreeSet::from(["box".to_string()]),
        taboo_zones: vec![],
        start: Configuration::at(1.0, 1.5, 0.0),
        radius: DEFAULT_RADIUS,
        goals: vec![Point::new(5.0, 1.5)],
        sensor: SensorModel::default(),
        resolution: DEFAULT_RESOLUTION,
        unit_push: DEFAULT_UNIT_PUSH,
        mode: Mode::Snamo,
        step_budget: DEFAULT_STEP_BUDGET,
    };
    let path = std::env::temp_dir().join("snamo-built.scn");
    save_scenario(&spec, &path)?;
    let loaded = load_scenario(&path)?;
    assert_eq!(loaded, spec);
    println!("{}", std::fs::read_to_string(&path)?);

    let mut mission = Mission::new(loaded.ground_truth(), loaded.mode, loaded.step_budget)?;
    let outcomes = mission.run(&loaded.goals)?;
    let m = &mission.trace.metrics;
    println!("outcomes {outcomes:?}: {:.3} m, {} pushes, {} replans", m.path_length, m.pushes, m.replans);
    let crate_now = mission.truth.obstacles["crate"].footprint.centroid();
    println!("crate now at ({:.2}, {:.2})", crate_now.x, crate_now.y);
    Ok(())
}
