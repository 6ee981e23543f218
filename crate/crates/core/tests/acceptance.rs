//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines are printed even when everything passes.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use adaptive_kuramoto::dynamics::simulate_static_pair;
use adaptive_kuramoto::dynamics::wrap_error;
use adaptive_kuramoto::presets::*;
use adaptive_kuramoto::torus::{default_horizon, zero_torus, DEFAULT_STEP};
use adaptive_kuramoto::*;

struct Line {
    id: &'static str,
    passed: bool,
    detail: String,
}

fn line(id: &'static str, passed: bool, detail: String) -> Line {
    Line { id, passed, detail }
}

fn criterion_1() -> Line {
    let p = seven_node_fixed();
    check_conditions(&p.network, &p.partition, &p.plasticity).unwrap();
    let start = Instant::now();
    let r = check_conditions(&p.network, &p.partition, &p.plasticity).unwrap();
    let elapsed = start.elapsed();
    // w_min − μδc_max/γ = √0.8·0 + 0.5 − 0.001·1/0.2
    let lhs = 0.5 - 0.001 / 0.2;
    let passed = r.overall
        && r.lhs_a3 == lhs
        && (r.ratio_a3 - 0.9615).abs() <= 5e-4
        && elapsed.as_secs_f64() < 1e-3;
    line(
        "1",
        passed,
        format!(
            "7-node fixed: lhs {} (want {lhs}), ratio {:.6} (want 0.9615 ± 5e-4), {:.1} µs",
            r.lhs_a3,
            r.ratio_a3,
            elapsed.as_secs_f64() * 1e6
        ),
    )
}

fn criterion_2() -> Line {
    let p = five_node();
    let r = check_conditions(&p.network, &p.partition, &p.plasticity).unwrap();
    let c = &r.cardinalities;
    let counts = c.c_out == 12 && c.c_sr[0][1] == 2 && c.c_sr[1][0] == 3 && c.c_max == 3;
    // independent evaluation of the two (A3) quantities
    let (gamma, mu, delta) = (1.0, 0.01, 1.0);
    let (w_min, w_max) = (2f64.sqrt() / 3.0, 0.5);
    let (c_max, c_out, sum_c_sr) = (3.0, 12f64, 5.0);
    let lhs = w_min - mu * delta * c_max / gamma;
    let ratio = 4.0 * mu / (gamma * gamma)
        * delta
        * c_out.sqrt()
        * sum_c_sr
        * (w_max + mu * delta * c_max / gamma)
        / lhs;
    let passed = r.overall
        && counts
        && (r.lhs_a3 - lhs).abs() <= 1e-5
        && (r.ratio_a3 - ratio).abs() <= 1e-3
        && (r.ratio_a3 - 0.8319).abs() <= 1e-3;
    line(
        "2",
        passed,
        format!(
            "5-node: c_out {} c_12 {} c_21 {} c_max {}; lhs {:.7} (oracle {lhs:.7}, listed as 0.44142); ratio {:.5} (oracle {ratio:.5})",
            c.c_out, c.c_sr[0][1], c.c_sr[1][0], c.c_max, r.lhs_a3, r.ratio_a3
        ),
    )
}

fn criterion_3() -> Line {
    let p = five_node();
    let start = Instant::now();
    let s = five_node_initial(42).unwrap();
    let traj = simulate(
        &p.network,
        &p.plasticity,
        &s,
        SimConfig::new(2000.0, 0.01, 10),
        Some(&p.partition),
    )
    .unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let metrics = error_metrics(&traj, 1e-3).unwrap();
    let tail = traj.len() - (traj.len() as f64 * 0.05).ceil() as usize;
    let intra = p
        .network
        .edges()
        .into_iter()
        .filter(|&(i, j)| p.partition.same_cluster(i, j))
        .collect::<Vec<_>>();
    let drift = traj.states()[tail..]
        .iter()
        .flat_map(|st| {
            intra
                .iter()
                .map(move |&(i, j)| (st.couplings[[i, j]] - 0.01).abs())
        })
        .fold(0.0, f64::max);
    let passed = metrics.sup_final_error < 1e-3 && drift <= 1e-4 && elapsed < 30.0;
    line(
        "3",
        passed,
        format!(
            "5-node t=2000: final max|e| {:.2e}, max|k_intra − 0.01| {drift:.2e} over last 5%, {elapsed:.2} s",
            metrics.sup_final_error
        ),
    )
}

fn criterion_4() -> Line {
    let p = seven_node_original();
    let s = seven_node_synchronous_start(&p.network, &p.partition).unwrap();
    let traj = simulate(
        &p.network,
        &p.plasticity,
        &s,
        SimConfig::new(1000.0, 0.01, 10),
        Some(&p.partition),
    )
    .unwrap();
    let first = traj
        .times()
        .iter()
        .zip(traj.max_abs_errors())
        .find(|(_, e)| *e > 0.05)
        .map(|(t, _)| *t);
    let peak = error_metrics(&traj, 1e-3).unwrap().peak_error;
    line(
        "4",
        first.is_some(),
        format!(
            "7-node original from e = 0: peak max|e| {peak:.3}, first above 0.05 at t = {first:?}"
        ),
    )
}

fn criterion_5() -> Line {
    let before = seven_node_original();
    let after = seven_node_fixed();
    let s = seven_node_initial(&before.network, 42).unwrap();
    let traj = switch_topology_scenario(
        &before.network,
        &after.network,
        &before.plasticity,
        &s,
        500.0,
        SimConfig::new(1500.0, 0.01, 10),
        Some(&before.partition),
    )
    .unwrap();
    let m = error_metrics(&traj, 1e-3).unwrap();
    line(
        "5",
        m.sup_final_error < 1e-3,
        format!(
            "switch at t=500, t_end 1500: final max|e| {:.3e}",
            m.sup_final_error
        ),
    )
}

/// `μ Re[e^{iψ}(1 − e^{−(γ+iΔ)H})/(γ + iΔ)]`
fn first_iterate_oracle(mu: f64, gamma: f64, delta: f64, psi: f64, horizon: f64) -> f64 {
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

fn torus_at(resolution: usize) -> (TorusFunction, IterationLog) {
    let p = five_node();
    let config = TorusConfig {
        resolution,
        ..TorusConfig::default()
    };
    solve_torus(&p.network, &p.partition, &p.plasticity, config).unwrap()
}

fn criterion_6(u: &TorusFunction, log: &IterationLog) -> Line {
    let p = five_node();
    let pp = &p.plasticity;
    let h = default_horizon(pp);
    let u1 = torus::iterate_once(
        &p.network,
        &p.partition,
        pp,
        &zero_torus(&p.network, &p.partition, 64).unwrap(),
        h,
        DEFAULT_STEP,
    )
    .unwrap();
    let w = p.network.frequencies();
    let mut first_err = 0.0f64;
    for g in 0..u1.grid_len() {
        let phi = u1.grid_point(g);
        for (e, &(i, j)) in u1.edge_order().iter().enumerate() {
            let (s, r) = (p.partition.cluster_of(i), p.partition.cluster_of(j));
            let dw = w[p.partition.representative(r)] - w[p.partition.representative(s)];
            let exact = first_iterate_oracle(pp.mu(), pp.gamma(), dw, phi[r] - phi[s], h);
            first_err = first_err.max((u1.at(g)[e] - exact).abs());
        }
    }
    let rho = log.theoretical_ratio;
    let worst = log
        .empirical_ratios()
        .into_iter()
        .skip(3)
        .fold(0.0, f64::max);
    let dw = w[3] - w[0];
    let amplitude = pp.mu() / (pp.gamma().powi(2) + dw * dw).sqrt();
    let passed = log.converged
        && log.iterations_used <= 60
        && worst <= 1.1 * rho
        && first_err <= 1e-6
        && u.resolution() == 64;
    line(
        "6",
        passed,
        format!(
            "torus 64: {} iterations, worst ratio after burn-in {worst:.4} vs 1.1 × {rho:.4}, first iterate vs closed form {first_err:.2e} (amplitude {amplitude:.6})",
            log.iterations_used
        ),
    )
}

fn criterion_7(u: &TorusFunction) -> (Line, f64) {
    let p = five_node();
    let residual = invariance_residual(&p.network, &p.partition, &p.plasticity, u).unwrap();
    let manifold = full_manifold(&p.network, &p.partition, &p.plasticity, u).unwrap();
    let reps = p.partition.representatives();
    let mut deviation = 0.0f64;
    for start in [[0.3, 2.0], [5.0, 1.0]] {
        let s = manifold
            .state_on_manifold(&p.network, &p.partition, &start)
            .unwrap();
        let traj = simulate(
            &p.network,
            &p.plasticity,
            &s,
            SimConfig::new(200.0, 0.01, 10),
            Some(&p.partition),
        )
        .unwrap();
        for st in traj.states() {
            let phi: Vec<f64> = reps.iter().map(|&i| st.phases[i]).collect();
            let d2: f64 = u
                .edge_order()
                .iter()
                .zip(u.eval_cubic(&phi))
                .map(|(&(i, j), v)| (st.couplings[[i, j]] - v).powi(2))
                .sum();
            deviation = deviation.max(d2.sqrt());
        }
    }
    let passed = residual < 1e-3 && deviation < 10.0 * residual;
    (
        line(
            "7",
            passed,
            format!("torus 128: residual {residual:.3e}, deviation along the flow over [0, 200] {deviation:.3e} ({:.2}× residual)", deviation / residual),
        ),
        residual,
    )
}

fn criterion_8() -> Line {
    let net = OscillatorNetwork::complete(vec![0.5; 5]).unwrap();
    let part = ClusterPartition::new(5, vec![vec![0, 1, 2], vec![3, 4]]).unwrap();
    let pp = PlasticityParams::hebbian(1.0, 0.01).unwrap();
    let k = pp.mu() / pp.gamma();
    let phi1 = 0.3;
    let phases: Vec<f64> = (0..5)
        .map(|i| if i < 3 { phi1 } else { phi1 + PI })
        .collect();
    let s = NetworkState::from_edges(
        &net,
        phases,
        |i, j| if part.same_cluster(i, j) { k } else { -k },
    )
    .unwrap();
    let d = rhs_full(&net, &pp, &s).unwrap();
    let de = (0..5)
        .map(|i| (d.phase_rates[i] - d.phase_rates[part.representative(part.cluster_of(i))]).abs())
        .fold(0.0, f64::max);
    let dk = d.coupling_rates.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let dpsi = (d.phase_rates[3] - d.phase_rates[0]).abs();
    let worst = de.max(dk).max(dpsi);
    line(
        "8",
        worst <= 1e-14,
        format!("anti-phase constant torus: |ė| {de:.1e}, |k̇| {dk:.1e}, |d(φ2−φ1)/dt| {dpsi:.1e}"),
    )
}

fn criterion_9() -> Line {
    let (w1, w2, k): (f64, f64, f64) = (0.9, 1.1, 1.0);
    let d = ((w2 - w1) / (2.0 * k)).asin();
    let a = two_oscillator_static_analysis(w1, w2, k).unwrap();
    let run = simulate_static_pair(w1, w2, k, [0.0, 1.0], 200.0, 0.01).unwrap();
    let same = simulate_static_pair(1.0, 1.0, k, [0.0, 0.2], 200.0, 0.01).unwrap();
    // adaptive identical pair, each node its own cluster
    let net = OscillatorNetwork::complete(vec![1.0, 1.0]).unwrap();
    let pp = PlasticityParams::hebbian(1.0, 0.5).unwrap();
    let s = NetworkState::from_edges(&net, vec![0.0, 0.2], |_, _| 0.5).unwrap();
    let traj = simulate(&net, &pp, &s, SimConfig::new(200.0, 0.01, 100), None).unwrap();
    let last = traj.last_state().unwrap();
    let adaptive_gap = wrap_error(last.phases[1] - last.phases[0]).abs();
    let passed = (run.phase_difference - d).abs() <= 1e-4
        && (run.mean_frequency - (w1 + w2) / 2.0).abs() <= 1e-5
        && a.d.is_some_and(|x| (x - d).abs() < 1e-15)
        && same.phase_difference.abs() < 1e-8
        && adaptive_gap < 1e-8;
    line(
        "9",
        passed,
        format!(
            "pair (0.9, 1.1, 1): Δθ {:.7} (arcsin {d:.7}), mean freq {:.8}; identical pair gap {:.1e} static, {adaptive_gap:.1e} adaptive",
            run.phase_difference,
            run.mean_frequency,
            same.phase_difference.abs()
        ),
    )
}

fn criterion_10() -> Line {
    let p = seven_node_original();
    let d = design_topology(&p.network, &p.partition, &p.plasticity, 3).unwrap();
    let edits = d.perturbation.to_sparse();
    let removes_into_7 = matches!(edits.as_slice(), [(6, j, -1)] if !p.partition.same_cluster(6, *j) && p.network.has_edge(6, *j));
    let corollary =
        check_corollary(&p.network, &d.perturbation, &p.partition, &p.plasticity).unwrap();
    // the only 0-edit candidate is the network itself
    let zero_edit = check_conditions(&p.network, &p.partition, &p.plasticity)
        .unwrap()
        .overall;
    let passed = d.feasible && d.edits == 1 && removes_into_7 && corollary.overall && !zero_edit;
    line(
        "10",
        passed,
        format!(
            "design: edits {:?} (1-based receiver, source), corollary ratio {:.4}, 0-edit network passes: {zero_edit}",
            edits.iter().map(|&(i, j, v)| (i + 1, j + 1, v)).collect::<Vec<_>>(),
            corollary.ratio_a3
        ),
    )
}

fn doubling(u64: &TorusFunction, u128: &TorusFunction, residual: f64) -> Line {
    let diff = (0..u64.grid_len())
        .map(|g| {
            let a = u64.at(g);
            let b = u128.eval(&u64.grid_point(g));
            a.iter()
                .zip(&b)
                .map(|(x, y)| (x - y).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max);
    line(
        "6/7 doubling",
        diff < 4.0 * residual,
        format!(
            "64 vs 128 sup difference {diff:.3e} vs 4 × residual {:.3e}",
            4.0 * residual
        ),
    )
}

fn main() -> ExitCode {
    let mut lines = vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
    ];
    let (u64, log64) = torus_at(64);
    lines.push(criterion_6(&u64, &log64));
    let (u128, _) = torus_at(128);
    let (l7, residual) = criterion_7(&u128);
    lines.push(l7);
    lines.push(criterion_8());
    lines.push(criterion_9());
    lines.push(criterion_10());
    lines.push(doubling(&u64, &u128, residual));
    for l in &lines {
        println!(
            "criterion {:<12} {}  {}",
            l.id,
            if l.passed { "PASS" } else { "FAIL" },
            l.detail
        );
    }
    if lines.iter().all(|l| l.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
