//! Runs a bundled scenario in one mode and prints the event log.
//!
//! `cargo run --example run_scenario -- scenarios/two_rooms.scn namo`

use snamo::cli::simulate;
use snamo::scenario::load_scenario;
use snamo::Mode;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "scenarios/two_rooms.scn".into());
    let spec = load_scenario(&path)?;
    let mode: Mode = match args.next() {
        Some(m) => m.parse()?,
        None => spec.mode,
    };
    let result = simulate(&spec, mode, spec.step_budget)?;
    for e in &result.trace.events {
        if !matches!(e.kind, snamo::simulator::EventKind::Transit | snamo::simulator::EventKind::Push) {
            let p = e.robot_pose.position;
            println!("{:>5} {:<12} ({:.2}, {:.2}) {}", e.tick, format!("{:?}", e.kind), p.x, p.y, e.note);
        }
    }
    println!("{}", serde_json::to_string_pretty(&result.summary)?);
    Ok(())
}
