//! Runs the seven-node network on its original topology until t = 500 and
//! on the repaired one afterwards.

use adaptive_kuramoto::presets::{seven_node_fixed, seven_node_initial, seven_node_original};
use adaptive_kuramoto::{error_metrics, switch_topology_scenario, SimConfig};

fn main() -> adaptive_kuramoto::Result<()> {
    let before = seven_node_original();
    let after = seven_node_fixed();
    let initial = seven_node_initial(&before.network, 42)?;
    let traj = switch_topology_scenario(
        &before.network,
        &after.network,
        &before.plasticity,
        &initial,
        500.0,
        SimConfig::new(1500.0, 0.01, 10),
        Some(&before.partition),
    )?;
    let errors = traj.max_abs_errors();
    for (t, e) in traj.times().iter().zip(&errors).step_by(2_500) {
        println!("t = {t:>6.0}  max|e| = {e:.3e}");
    }
    let m = error_metrics(&traj, 1e-3)?;
    println!(
        "final max|e| {:.3e}, below 1e-3 from t = {:?}",
        m.sup_final_error, m.time_to_tolerance
    );
    Ok(())
}
