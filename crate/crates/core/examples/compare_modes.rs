//! Runs a scenario with and without social constraints and prints the
//! comparison table.
//!
//! `cargo run --example compare_modes -- scenarios/two_rooms.scn`

use std::path::Path;

use snamo::cli::compare;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "scenarios/two_rooms.scn".into());
    let out = std::env::temp_dir().join("snamo-compare");
    let cmp = compare(Path::new(&path), &out)?;
    print!("{}", cmp.table());
    println!("outputs in {}", out.display());
    Ok(())
}
