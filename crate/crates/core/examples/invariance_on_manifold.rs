//! Starts the full network on the computed torus and checks that the
//! inter-cluster couplings stay on it.

use adaptive_kuramoto::presets::five_node;
use adaptive_kuramoto::{
    full_manifold, invariance_residual, simulate, solve_torus, SimConfig, TorusConfig,
};

fn main() -> adaptive_kuramoto::Result<()> {
    let p = five_node();
    let config = TorusConfig {
        resolution: 48,
        ..TorusConfig::default()
    };
    let (u, _) = solve_torus(&p.network, &p.partition, &p.plasticity, config)?;
    let residual = invariance_residual(&p.network, &p.partition, &p.plasticity, &u)?;
    let manifold = full_manifold(&p.network, &p.partition, &p.plasticity, &u)?;

    let start = manifold.state_on_manifold(&p.network, &p.partition, &[0.3, 2.0])?;
    let traj = simulate(
        &p.network,
        &p.plasticity,
        &start,
        SimConfig::new(200.0, 0.01, 10),
        Some(&p.partition),
    )?;
    let reps = p.partition.representatives();
    let mut deviation = 0.0f64;
    for s in traj.states() {
        let phi: Vec<f64> = reps.iter().map(|&i| s.phases[i]).collect();
        let on_torus = u.eval_cubic(&phi);
        let d2: f64 = u
            .edge_order()
            .iter()
            .zip(&on_torus)
            .map(|(&(i, j), v)| (s.couplings[[i, j]] - v).powi(2))
            .sum();
        deviation = deviation.max(d2.sqrt());
    }
    let max_error = traj.max_abs_errors().into_iter().fold(0.0, f64::max);
    println!("residual              {residual:.3e}");
    println!("max coupling drift    {deviation:.3e}");
    println!("max intra-cluster |e| {max_error:.3e}");
    Ok(())
}
