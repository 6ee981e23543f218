//! Simulates the five-node network from staggered phases and random initial
//! couplings, then reports how fast the clusters form.
//!
//! `cargo run --release --example simulate_five_node [seed] [trajectory.csv]`

use std::fs::File;
use std::io::BufWriter;

use adaptive_kuramoto::presets::{five_node, five_node_initial};
use adaptive_kuramoto::{error_metrics, simulate, SimConfig};

fn main() -> adaptive_kuramoto::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed = args.next().map(|s| s.parse().expect("seed")).unwrap_or(42);
    let p = five_node();
    let initial = five_node_initial(seed)?;
    let traj = simulate(
        &p.network,
        &p.plasticity,
        &initial,
        SimConfig::new(2000.0, 0.01, 10),
        Some(&p.partition),
    )?;
    let m = error_metrics(&traj, 1e-3)?;
    println!("samples            {}", traj.len());
    println!("peak |e|           {:.3e}", m.peak_error);
    println!("final |e|          {:.3e}", m.sup_final_error);
    println!("below 1e-3 from t= {:?}", m.time_to_tolerance);
    for c in &m.intra_coupling_limits {
        println!("k_{}{} -> {:.6}", c.receiver + 1, c.source + 1, c.mean);
    }
    if let Some(path) = args.next() {
        traj.write_csv(BufWriter::new(File::create(&path)?))?;
        println!("wrote {path}");
    }
    Ok(())
}
