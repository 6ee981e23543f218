//! Loads a scenario file and runs it programmatically.
//!
//! `cargo run --release --example run_scenario [path] [out-dir]`

use std::path::PathBuf;

use adaptive_kuramoto::scenario::{run_scenario, Overrides, Scenario};

fn main() -> adaptive_kuramoto::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/scenarios/seven_node_design.json")
    });
    let out = args.next().map(PathBuf::from);
    let scenario = Scenario::load(&path)?;
    let outcome = run_scenario(&scenario, out.as_deref(), &Overrides::default())?;
    println!("{}", serde_json::to_string_pretty(&outcome)?);
    Ok(())
}
