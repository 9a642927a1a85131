//! A* and multi-goal A* on an occupancy grid with a slotted wall.
//!
//! `cargo run --example grid_search`

use snamo::geometry::{rasterize, ConvexPolygon, Point, Rect};
use snamo::planner::{astar, multigoal_astar};
use snamo::Configuration;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let walls = [ConvexPolygon::rectangle(2.0, 0.0, 2.2, 2.6)?, ConvexPolygon::rectangle(2.0, 3.2, 2.2, 4.0)?];
    let grid = rasterize(&walls, Rect::new(Point::new(0.0, 0.0), Point::new(5.0, 4.0)), 0.1)?;
    let start = Configuration::at(0.5, 0.5, 0.0);

    let path = astar(&grid, start, Configuration::at(4.5, 0.5, 0.0))?.ok_or("goal unreachable")?;
    println!("single goal: {} waypoints, {:.3} m", path.waypoints.len(), path.cost);

    let goals = [
        Configuration::at(4.5, 0.5, 0.0),
        Configuration::at(4.5, 3.5, 0.0),
        Configuration::at(2.1, 1.0, 0.0),
        Configuration::at(1.0, 3.5, 0.0),
    ];
    let found = multigoal_astar(&grid, start, &goals)?;
    for (k, g) in goals.iter().enumerate() {
        match found.get(&k) {
            Some(p) => println!("goal {k} at ({:.1}, {:.1}): {:.3} m", g.position.x, g.position.y, p.cost),
            None => println!("goal {k} at ({:.1}, {:.1}): unreachable", g.position.x, g.position.y),
        }
    }
    Ok(())
}
