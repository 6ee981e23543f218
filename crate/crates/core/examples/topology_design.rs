//! Finds the smallest rewiring of the seven-node network that admits the
//! two-cluster partition, then shows that a tenfold gain cannot be rescued
//! with three edits.

use adaptive_kuramoto::presets::seven_node_original;
use adaptive_kuramoto::{design_topology, Error};

fn main() -> adaptive_kuramoto::Result<()> {
    let p = seven_node_original();
    let d = design_topology(&p.network, &p.partition, &p.plasticity, 3)?;
    println!("{}", serde_json::to_string_pretty(&d)?);

    let strong = p.plasticity.with_mu(0.01)?;
    match design_topology(&p.network, &p.partition, &strong, 3) {
        Ok(d) => println!(
            "mu = 0.01: feasible {} (best ratio {:.3} with {} edits)",
            d.feasible, d.report.ratio_a3, d.edits
        ),
        Err(Error::SearchExhausted(msg)) => println!("mu = 0.01: {msg}"),
        Err(e) => return Err(e),
    }
    Ok(())
}
