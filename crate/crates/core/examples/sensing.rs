//! One sensing step from the start of a bundled scenario: which obstacles
//! are detected and which are identified.
//!
//! `cargo run --example sensing -- scenarios/observe_before_push.scn`

use snamo::geometry::contains_polygon;
use snamo::scenario::load_scenario;
use snamo::world::sense;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "scenarios/observe_before_push.scn".into());
    let spec = load_scenario(&path)?;
    let truth = spec.ground_truth();
    let before = truth.initial_knowledge(spec.mode);
    let after = sense(&truth, &before);
    let s_fov = truth.sensor.s_fov(truth.robot);
    println!("robot at ({:.2}, {:.2}) facing {:.2} rad, mode {}", truth.robot.position.x, truth.robot.position.y, truth.robot.heading, spec.mode);
    for (id, t) in &truth.obstacles {
        let state = match after.obstacle(id) {
            None => "not detected".to_string(),
            Some(o) => format!("{:?}", o.movability),
        };
        println!(
            "{id:<8} class {:<8} in semantic view: {:<5} knowledge: {state}",
            t.class_label,
            contains_polygon(&s_fov, &t.footprint)
        );
    }
    Ok(())
}
