use std::f64::consts::TAU;

use adaptive_kuramoto::presets::{five_node, seven_node_fixed, seven_node_original};
use adaptive_kuramoto::torus::{default_horizon, export_surface, zero_torus, DEFAULT_STEP};
use adaptive_kuramoto::*;

/// `μ ∫_{−H}^0 e^{γτ} cos(ψ + Δτ) dτ = μ Re[e^{iψ} (1 − e^{−(γ+iΔ)H}) / (γ + iΔ)]`.
fn linear_flow_integral(mu: f64, gamma: f64, delta: f64, psi: f64, horizon: f64) -> f64 {
    let decay = (-gamma * horizon).exp();
    let (nr, ni) = (
        1.0 - decay * (delta * horizon).cos(),
        decay * (delta * horizon).sin(),
    );
    let d2 = gamma * gamma + delta * delta;
    let (qr, qi) = (
        (nr * gamma + ni * delta) / d2,
        (ni * gamma - nr * delta) / d2,
    );
    mu * (psi.cos() * qr - psi.sin() * qi)
}

#[test]
fn first_iterate_is_the_linear_flow_integral() {
    let p = five_node();
    let pp = &p.plasticity;
    let u0 = zero_torus(&p.network, &p.partition, 16).unwrap();
    let h = default_horizon(pp);
    let u1 = torus::iterate_once(&p.network, &p.partition, pp, &u0, h, DEFAULT_STEP).unwrap();
    let w = p.network.frequencies();
    let mut worst = 0.0f64;
    for g in 0..u1.grid_len() {
        let phi = u1.grid_point(g);
        for (e, &(i, j)) in u1.edge_order().iter().enumerate() {
            let (s, r) = (p.partition.cluster_of(i), p.partition.cluster_of(j));
            let wr = w[p.partition.representative(r)];
            let ws = w[p.partition.representative(s)];
            let exact = linear_flow_integral(pp.mu(), pp.gamma(), wr - ws, phi[r] - phi[s], h);
            worst = worst.max((u1.at(g)[e] - exact).abs());
        }
    }
    assert!(worst < 1e-6, "max deviation {worst}");
    // every component is a sinusoid of amplitude μ/√(γ² + Δw̄²)
    let dw = w[3] - w[0];
    let amplitude = pp.mu() / (pp.gamma().powi(2) + dw * dw).sqrt();
    let peak = (0..u1.grid_len())
        .map(|g| u1.at(g)[0].abs())
        .fold(0.0, f64::max);
    assert!(peak <= amplitude + 1e-12 && peak > 0.99 * amplitude);
}

#[test]
fn zero_gain_converges_immediately_to_zero() {
    let p = five_node();
    let pp = p.plasticity.with_mu(0.0).unwrap();
    let config = TorusConfig {
        resolution: 16,
        ..TorusConfig::default()
    };
    let (u, log) = solve_torus(&p.network, &p.partition, &pp, config).unwrap();
    assert_eq!(log.iterations_used, 1);
    assert!(log.converged);
    assert_eq!(u.sup_norm(), 0.0);
    assert_eq!(
        invariance_residual(&p.network, &p.partition, &pp, &u).unwrap(),
        0.0
    );
}

#[test]
fn residual_of_the_zero_torus() {
    let p = five_node();
    let u = zero_torus(&p.network, &p.partition, 32).unwrap();
    let r = invariance_residual(&p.network, &p.partition, &p.plasticity, &u).unwrap();
    // all twelve components are ±cos(φ_2 − φ_1); the grid contains φ_2 = φ_1
    assert!((r - 0.01 * 12f64.sqrt()).abs() < 1e-15);
    assert!(invariance_residual(
        &p.network,
        &p.partition,
        &p.plasticity,
        &zero_torus(&p.network, &p.partition, 8).unwrap()
    )
    .is_err());
}

#[test]
fn iterates_contract_and_respect_the_bounds() {
    let p = five_node();
    let config = TorusConfig {
        resolution: 24,
        ..TorusConfig::default()
    };
    let (u, log) = solve_torus(&p.network, &p.partition, &p.plasticity, config).unwrap();
    assert!(log.converged && *log.differences.last().unwrap() < config.tol);
    let rho = log.theoretical_ratio;
    for (l, r) in log.empirical_ratios().iter().enumerate().skip(3) {
        assert!(*r <= 1.1 * rho, "iteration {l}: {r} > 1.1 × {rho}");
    }
    let pp = &p.plasticity;
    let bound = pp.mu() * pp.delta() * 12f64.sqrt() / pp.gamma();
    let tail = (-pp.gamma() * default_horizon(pp)).exp() * bound;
    assert!(log.sup_norms.iter().all(|&s| s <= bound + tail));

    // links between the same ordered pair of clusters carry one function
    for g in 0..u.grid_len() {
        let v = u.at(g);
        for (a, &(i, j)) in u.edge_order().iter().enumerate() {
            for (b, &(k, l)) in u.edge_order().iter().enumerate() {
                let same = p.partition.cluster_of(i) == p.partition.cluster_of(k)
                    && p.partition.cluster_of(j) == p.partition.cluster_of(l);
                if same {
                    assert!((v[a] - v[b]).abs() <= config.tol);
                }
            }
        }
    }
}

#[test]
fn seven_node_torus_converges() {
    let p = seven_node_fixed();
    let config = TorusConfig {
        resolution: 16,
        ..TorusConfig::default()
    };
    let (u, log) = solve_torus(&p.network, &p.partition, &p.plasticity, config).unwrap();
    assert!(log.converged);
    assert!((log.theoretical_ratio - 0.9615).abs() < 5e-4);
    assert!(log
        .empirical_ratios()
        .iter()
        .skip(3)
        .all(|&r| r <= log.theoretical_ratio));
    assert_eq!(u.c_out(), 7);
    let m = full_manifold(&p.network, &p.partition, &p.plasticity, &u).unwrap();
    assert!((m.intra - 0.005).abs() < 1e-18);
}

#[test]
fn intra_value_follows_the_rule_at_zero() {
    let p = five_node();
    let u = zero_torus(&p.network, &p.partition, 4).unwrap();
    assert_eq!(
        full_manifold(&p.network, &p.partition, &p.plasticity, &u)
            .unwrap()
            .intra,
        0.01
    );
    let samples = (0..32).map(|k| (TAU * k as f64 / 32.0).sin()).collect();
    let pp = PlasticityParams::new(1.0, 0.01, LearningRule::Tabulated { samples }).unwrap();
    assert_eq!(
        full_manifold(&p.network, &p.partition, &pp, &u)
            .unwrap()
            .intra,
        0.0
    );
}

#[test]
fn manifold_states_stay_cluster_synchronous() {
    let p = five_node();
    let config = TorusConfig {
        resolution: 24,
        ..TorusConfig::default()
    };
    let (u, _) = solve_torus(&p.network, &p.partition, &p.plasticity, config).unwrap();
    let m = full_manifold(&p.network, &p.partition, &p.plasticity, &u).unwrap();
    let s = m
        .state_on_manifold(&p.network, &p.partition, &[1.0, 4.0])
        .unwrap();
    assert!(s.cluster_errors(&p.partition).iter().all(|&e| e == 0.0));
    let traj = simulate(
        &p.network,
        &p.plasticity,
        &s,
        SimConfig::new(100.0, 0.01, 10),
        Some(&p.partition),
    )
    .unwrap();
    assert!(traj.max_abs_errors().iter().all(|&e| e < 1e-6));
}

#[test]
fn preconditions_are_enforced() {
    let p = seven_node_original();
    let u = TorusFunction::zeros(2, 8, vec![(0, 4)]).unwrap();
    assert!(matches!(
        torus::iterate_once(&p.network, &p.partition, &p.plasticity, &u, 10.0, 0.1),
        Err(Error::A2Violated)
    ));
    let config = TorusConfig {
        resolution: 8,
        max_iter: 2,
        ..TorusConfig::default()
    };
    let q = five_node();
    let strong = q.plasticity.with_mu(0.012).unwrap();
    assert!(
        check_conditions(&q.network, &q.partition, &strong)
            .unwrap()
            .ratio_a3
            > 1.0
    );
    assert!(matches!(
        solve_torus(&q.network, &q.partition, &strong, config),
        Err(Error::ConditionsFailed(_))
    ));
    let forced = TorusConfig {
        force: true,
        ..config
    };
    assert!(!matches!(
        solve_torus(&q.network, &q.partition, &strong, forced),
        Err(Error::ConditionsFailed(_))
    ));
    let hopeless = q.plasticity.with_mu(1.0).unwrap();
    assert!(matches!(
        solve_torus(&q.network, &q.partition, &hopeless, forced),
        Err(Error::NotSeparated(_))
    ));
}

#[test]
fn three_clusters_share_the_code_path() {
    let rows: Vec<Vec<i64>> = (0..6)
        .map(|i| (0..6).map(|j| (i != j && i / 2 != j / 2) as i64).collect())
        .collect();
    let net = OscillatorNetwork::from_rows(&rows, vec![0.6, 0.6, 0.8, 0.8, 1.0, 1.0]).unwrap();
    let part = ClusterPartition::new(6, vec![vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap();
    let pp = PlasticityParams::hebbian(1.0, 0.001).unwrap();
    assert!(check_conditions(&net, &part, &pp).unwrap().overall);
    let config = TorusConfig {
        resolution: 8,
        ..TorusConfig::default()
    };
    let (u, log) = solve_torus(&net, &part, &pp, config).unwrap();
    assert!(log.converged);
    assert_eq!((u.m(), u.grid_len(), u.c_out()), (3, 512, 24));
    assert!(export_surface(&u, u.edge_order()[0]).is_err());
}

#[test]
fn iteration_is_deterministic_and_files_round_trip() {
    let p = five_node();
    let config = TorusConfig {
        resolution: 12,
        ..TorusConfig::default()
    };
    let (a, la) = solve_torus(&p.network, &p.partition, &p.plasticity, config).unwrap();
    let (b, lb) = solve_torus(&p.network, &p.partition, &p.plasticity, config).unwrap();
    assert_eq!(a, b);
    assert_eq!(la, lb);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("torus.json");
    a.save(&p.plasticity, &path).unwrap();
    assert_eq!(TorusFunction::load(&path).unwrap(), a);
}
