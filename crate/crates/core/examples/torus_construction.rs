//! Builds the invariant torus of inter-cluster couplings for the five-node
//! network and prints the contraction history.
//!
//! `cargo run --release --example torus_construction [resolution] [surface.csv]`

use std::fs::File;
use std::io::BufWriter;

use adaptive_kuramoto::presets::five_node;
use adaptive_kuramoto::torus::{export_surface, write_surface_csv};
use adaptive_kuramoto::{full_manifold, invariance_residual, solve_torus, TorusConfig};

fn main() -> adaptive_kuramoto::Result<()> {
    let mut args = std::env::args().skip(1);
    let resolution = args
        .next()
        .map(|s| s.parse().expect("resolution"))
        .unwrap_or(32);
    let p = five_node();
    let config = TorusConfig {
        resolution,
        ..TorusConfig::default()
    };
    let (u, log) = solve_torus(&p.network, &p.partition, &p.plasticity, config)?;
    println!("theoretical ratio {:.4}", log.theoretical_ratio);
    for (l, z) in log.differences.iter().enumerate() {
        println!("  z_{:<2} = {z:.3e}", l + 1);
    }
    println!("empirical ratios {:.4?}", log.empirical_ratios());
    println!("|u|_0 = {:.6}", u.sup_norm());
    println!(
        "invariance residual {:.3e}",
        invariance_residual(&p.network, &p.partition, &p.plasticity, &u)?
    );
    let manifold = full_manifold(&p.network, &p.partition, &p.plasticity, &u)?;
    println!("intra-cluster couplings on the torus: {}", manifold.intra);
    if let Some(path) = args.next() {
        let rows = export_surface(&u, (0, 4))?;
        write_surface_csv(&rows, BufWriter::new(File::create(&path)?))?;
        println!("wrote {path}");
    }
    Ok(())
}
