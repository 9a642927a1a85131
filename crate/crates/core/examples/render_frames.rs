//! Simulates a scenario and writes its SVG frames and JSONL trace.
//!
//! `cargo run --example render_frames -- scenarios/hidden_obstacle.scn /tmp/frames`

use std::path::PathBuf;

use snamo::cli::simulate;
use snamo::scenario::{load_scenario, render_frames, write_trace};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "scenarios/hidden_obstacle.scn".into());
    let out = args.next().map_or_else(|| std::env::temp_dir().join("snamo-frames"), PathBuf::from);
    let spec = load_scenario(&path)?;
    let run = simulate(&spec, spec.mode, spec.step_budget)?;
    let frames = render_frames(&run.trace, &spec, &out)?;
    write_trace(&run.trace, out.join("trace.jsonl"))?;
    println!("{} events, {} frames in {}", run.trace.events.len(), frames.len(), out.display());
    Ok(())
}
