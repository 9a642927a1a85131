//! Observation planning for an unidentified obstacle: the poses from which
//! it can be identified, and the cheapest detour through one of them on the
//! way to a contact pose.
//!
//! `cargo run --example observation -- scenarios/observe_before_push.scn M`

use snamo::planner::{affordable_actions, compute_c0_c1, get_ql, q_for};
use snamo::scenario::load_scenario;
use snamo::world::{sense, Mode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "scenarios/observe_before_push.scn".into());
    let id = args.next().unwrap_or_else(|| "M".into());
    let spec = load_scenario(&path)?;
    let truth = spec.ground_truth();
    let w = sense(&truth, &truth.initial_knowledge(Mode::Snamo));
    let o = w.obstacle(&id).ok_or("obstacle not detected from the start")?;
    println!("{id}: {:?} after the first sensing", o.movability);

    let ql = get_ql(&w, o)?;
    println!("{} observation poses", ql.len());
    for q in ql.iter().take(5) {
        println!("  ({:.2}, {:.2}) facing {:.2}", q.position.x, q.position.y, q.heading);
    }

    for act in affordable_actions(o, w.unit_push) {
        let q_manip = q_for(&o.footprint, &act, w.robot_radius);
        if w.disc_collides(q_manip.position) {
            continue;
        }
        match compute_c0_c1(&w, o, w.robot, q_manip)? {
            Some((c0, c1)) => {
                let look = c0.last().position;
                println!(
                    "side {}: look from ({:.2}, {:.2}), c0 {:.3} m + c1 {:.3} m",
                    act.side_index, look.x, look.y, c0.cost, c1.cost
                );
            }
            None => println!("side {}: no observation detour", act.side_index),
        }
    }
    Ok(())
}
