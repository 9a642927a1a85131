//! Polygon offsets, separating-axis tests, sensor cones and conservative
//! rasterization on a small scene.
//!
//! `cargo run --example geometry`

use std::f64::consts::PI;

use snamo::geometry::{contains_polygon, inflate, inflate_covering, intersects, rasterize, ConeSector, ConvexPolygon, Point, Rect};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let crate_box = ConvexPolygon::rectangle(1.0, 1.0, 1.6, 1.4)?;
    let hexagon = ConvexPolygon::regular(Point::new(2.4, 1.2), 0.5, 6, 0.0)?;
    println!("box area {:.3}, hexagon area {:.3}", crate_box.area(), hexagon.area());
    println!("touching: {}, gap {:.3} m", intersects(&crate_box, &hexagon), crate_box.distance_to_polygon(&hexagon));

    for delta in [0.1, 0.3] {
        let inner = inflate(&crate_box, delta)?;
        let cover = inflate_covering(&crate_box, delta)?;
        println!(
            "offset {delta}: {} vertices, area {:.4} (covering {:.4}), meets hexagon: {}",
            inner.len(),
            inner.area(),
            cover.area(),
            intersects(&inner, &hexagon)
        );
    }

    let cone = ConeSector::new(Point::new(0.0, 1.2), 0.0, PI / 6.0, 3.0);
    println!("cone sees box whole: {}, touches hexagon: {}", contains_polygon(&cone, &crate_box), cone.intersects_polygon(&hexagon));

    let grid = rasterize(&[crate_box, hexagon], Rect::new(Point::new(0.0, 0.0), Point::new(3.2, 2.4)), 0.2)?;
    for j in (0..grid.height()).rev() {
        let row: String = (0..grid.width()).map(|i| if grid.is_occupied((i, j)) { '#' } else { '.' }).collect();
        println!("{row}");
    }
    Ok(())
}
