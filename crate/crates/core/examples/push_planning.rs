//! Plans through a doorway blocked by a box, once ignoring taboo zones and
//! once respecting them, with every obstacle already identified.
//!
//! `cargo run --example push_planning -- scenarios/corridor_taboo.scn`

use snamo::planner::make_plan;
use snamo::scenario::load_scenario;
use snamo::world::{MovabilityState, Obstacle};
use snamo::{Configuration, Mode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "scenarios/corridor_taboo.scn".into());
    let spec = load_scenario(&path)?;
    let truth = spec.ground_truth();
    let goal = spec.goals[0];
    let q_goal = Configuration::new(goal, (goal - spec.start.position).angle());

    for mode in [Mode::Namo, Mode::Snamo] {
        let mut w = truth.initial_knowledge(mode);
        for (id, t) in &truth.obstacles {
            let movability = if t.movable && (mode == Mode::Namo || truth.is_whitelisted(id)) {
                MovabilityState::Movable
            } else {
                MovabilityState::Unmovable
            };
            let o = Obstacle {
                id: id.clone(),
                footprint: t.footprint.clone(),
                movability,
                class_label: Some(t.class_label.clone()),
            };
            w.obstacles.insert(id.clone(), o);
        }
        println!("{mode}:");
        let Some(plan) = make_plan(&w, spec.start, q_goal)? else {
            println!("  no plan");
            continue;
        };
        for c in &plan.components {
            let end = c.last().position;
            println!("  {} {:>3} waypoints {:>7.3} m, ends at ({:.2}, {:.2})", c.kind.label(), c.waypoints.len(), c.cost, end.x, end.y);
        }
        if let Some(t) = &plan.target {
            let d = t.action.direction;
            let landing = w.obstacles[&t.obstacle_id].footprint.translated(d * (t.action.step * t.push_count as f64));
            println!(
                "  push {} {} x {:.2} m along ({:.2}, {:.2}); lands in a taboo zone: {}",
                t.obstacle_id,
                t.push_count,
                t.action.step,
                d.x,
                d.y,
                w.taboo.intersects(&landing)
            );
        }
        println!("  total {:.3} m", plan.cost());
    }
    Ok(())
}
