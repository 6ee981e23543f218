use ndarray::Array2;
use rand::Rng;
use rand::SeedableRng;
use rand_xoshiro::SplitMix64;

use super::trajectory::Trajectory;
use super::{wrap_error, wrap_phase};
use crate::error::{Error, Result};
use crate::integrate::Rk4;
use crate::network::{ClusterPartition, OscillatorNetwork};
use crate::plasticity::PlasticityParams;

/// Phases on the N-torus and the coupling matrix `K`.
///
/// Phases are kept in `[0, 2π)`. Coupling entries on non-edges are stored as
/// exact zeros and never read by the dynamics.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkState {
    pub phases: Vec<f64>,
    pub couplings: Array2<f64>,
}

impl NetworkState {
    /// Validates dimensions, wraps phases and clears non-edge couplings.
    pub fn new(net: &OscillatorNetwork, phases: Vec<f64>, couplings: Array2<f64>) -> Result<Self> {
        let n = net.n_nodes();
        if phases.len() != n {
            return Err(Error::Dimension(format!(
                "{} phases for {n} nodes",
                phases.len()
            )));
        }
        if couplings.dim() != (n, n) {
            return Err(Error::Dimension(format!(
                "coupling matrix is {:?}, expected {n}x{n}",
                couplings.dim()
            )));
        }
        if phases
            .iter()
            .chain(couplings.iter())
            .any(|v| !v.is_finite())
        {
            return Err(Error::Parameter("initial state is not finite".into()));
        }
        let mut couplings = couplings;
        for ((i, j), k) in couplings.indexed_iter_mut() {
            if !net.has_edge(i, j) {
                *k = 0.0;
            }
        }
        Ok(Self {
            phases: phases.into_iter().map(wrap_phase).collect(),
            couplings,
        })
    }

    /// Couplings given per edge by `coupling(receiver, source)`.
    pub fn from_edges(
        net: &OscillatorNetwork,
        phases: Vec<f64>,
        coupling: impl Fn(usize, usize) -> f64,
    ) -> Result<Self> {
        let n = net.n_nodes();
        let couplings = Array2::from_shape_fn((n, n), |(i, j)| {
            if net.has_edge(i, j) {
                coupling(i, j)
            } else {
                0.0
            }
        });
        Self::new(net, phases, couplings)
    }

    pub fn n_nodes(&self) -> usize {
        self.phases.len()
    }

    /// `wrap(θ_i − θ_{i_s})` for every non-representative node, in index order.
    pub fn cluster_errors(&self, part: &ClusterPartition) -> Vec<f64> {
        part.error_nodes()
            .into_iter()
            .map(|i| {
                wrap_error(self.phases[i] - self.phases[part.representative(part.cluster_of(i))])
            })
            .collect()
    }

    fn pack(&self, edges: &[(usize, usize)]) -> Vec<f64> {
        let mut y = self.phases.clone();
        y.extend(edges.iter().map(|&(i, j)| self.couplings[[i, j]]));
        y
    }
}

/// Time derivative of a [`NetworkState`]; coupling rates are zero off edges.
#[derive(Debug, Clone, PartialEq)]
pub struct StateDerivative {
    pub phase_rates: Vec<f64>,
    pub coupling_rates: Array2<f64>,
}

/// Right-hand side of the full network on a flat state `[θ; k_edges]`.
pub(crate) struct FullSystem<'a> {
    frequencies: &'a [f64],
    edges: Vec<(usize, usize)>,
    pp: &'a PlasticityParams,
}

impl<'a> FullSystem<'a> {
    pub(crate) fn new(net: &'a OscillatorNetwork, pp: &'a PlasticityParams) -> Self {
        Self {
            frequencies: net.frequencies(),
            edges: net.edges(),
            pp,
        }
    }

    fn dim(&self) -> usize {
        self.frequencies.len() + self.edges.len()
    }

    fn eval(&self, y: &[f64], dy: &mut [f64]) {
        let n = self.frequencies.len();
        let (gamma, mu) = (self.pp.gamma(), self.pp.mu());
        let (theta, k) = y.split_at(n);
        let (dtheta, dk) = dy.split_at_mut(n);
        dtheta.copy_from_slice(self.frequencies);
        for (e, &(i, j)) in self.edges.iter().enumerate() {
            let diff = theta[j] - theta[i];
            dtheta[i] += k[e] * diff.sin();
            dk[e] = -gamma * k[e] + mu * self.pp.learn(diff);
        }
    }
}

/// `θ̇_i = w_i + Σ_j a_ij k_ij sin(θ_j − θ_i)`, `k̇_ij = −γ k_ij + μ Γ(θ_j − θ_i)`.
pub fn rhs_full(
    net: &OscillatorNetwork,
    pp: &PlasticityParams,
    state: &NetworkState,
) -> Result<StateDerivative> {
    let n = net.n_nodes();
    if state.n_nodes() != n || state.couplings.dim() != (n, n) {
        return Err(Error::Dimension("state does not match the network".into()));
    }
    let sys = FullSystem::new(net, pp);
    let y = state.pack(&sys.edges);
    let mut dy = vec![0.0; sys.dim()];
    sys.eval(&y, &mut dy);
    let mut coupling_rates = Array2::zeros((n, n));
    for (e, &(i, j)) in sys.edges.iter().enumerate() {
        coupling_rates[[i, j]] = dy[n + e];
    }
    dy.truncate(n);
    Ok(StateDerivative {
        phase_rates: dy,
        coupling_rates,
    })
}

/// Fixed-step integration settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub t_end: f64,
    pub step: f64,
    /// Record every `record_stride`-th step (step 0 included).
    pub record_stride: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            t_end: 100.0,
            step: 0.01,
            record_stride: 10,
        }
    }
}

impl SimConfig {
    pub fn new(t_end: f64, step: f64, record_stride: usize) -> Self {
        Self {
            t_end,
            step,
            record_stride,
        }
    }

    fn validate(&self) -> Result<usize> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::Parameter(format!(
                "step must be positive, got {}",
                self.step
            )));
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::Parameter(format!(
                "t_end must be positive, got {}",
                self.t_end
            )));
        }
        if self.record_stride == 0 {
            return Err(Error::Parameter("record_stride must be at least 1".into()));
        }
        let steps = (self.t_end / self.step).round() as usize;
        Ok(steps.max(1))
    }
}

/// Integrates the full network with classical RK4, wrapping phases after
/// every step. With a partition, intra-cluster errors are recorded too.
pub fn simulate(
    net: &OscillatorNetwork,
    pp: &PlasticityParams,
    initial: &NetworkState,
    config: SimConfig,
    part: Option<&ClusterPartition>,
) -> Result<Trajectory> {
    let steps = config.validate()?;
    run_segments(&[(net, steps)], pp, initial, config, part)
}

/// Integrates under `before` until `t_switch`, then continues the same state
/// under `after`. Couplings of removed edges drop out of the state; added
/// edges start from zero.
pub fn switch_topology_scenario(
    before: &OscillatorNetwork,
    after: &OscillatorNetwork,
    pp: &PlasticityParams,
    initial: &NetworkState,
    t_switch: f64,
    config: SimConfig,
    part: Option<&ClusterPartition>,
) -> Result<Trajectory> {
    if before.n_nodes() != after.n_nodes() || before.frequencies() != after.frequencies() {
        return Err(Error::Dimension(
            "switched networks must share node count and frequencies".into(),
        ));
    }
    let steps = config.validate()?;
    if !(t_switch.is_finite() && t_switch >= 0.0) {
        return Err(Error::Parameter(format!("invalid switch time {t_switch}")));
    }
    let switch_step = ((t_switch / config.step).round() as usize).min(steps);
    if switch_step == steps {
        return run_segments(&[(before, steps)], pp, initial, config, part);
    }
    if switch_step == 0 {
        return run_segments(&[(after, steps)], pp, initial, config, part);
    }
    run_segments(
        &[(before, switch_step), (after, steps)],
        pp,
        initial,
        config,
        part,
    )
}

/// Each segment runs until its (global) end step.
fn run_segments(
    segments: &[(&OscillatorNetwork, usize)],
    pp: &PlasticityParams,
    initial: &NetworkState,
    config: SimConfig,
    part: Option<&ClusterPartition>,
) -> Result<Trajectory> {
    let first = segments[0].0;
    let n = first.n_nodes();
    if initial.n_nodes() != n || initial.couplings.dim() != (n, n) {
        return Err(Error::Dimension(
            "initial state does not match the network".into(),
        ));
    }
    if let Some(p) = part {
        p.check_fits(n)?;
    }

    let mut columns: Vec<(usize, usize)> = Vec::new();
    for (net, _) in segments {
        for e in net.edges() {
            if !columns.contains(&e) {
                columns.push(e);
            }
        }
    }
    columns.sort_unstable();

    let h = config.step;
    let mut traj = Trajectory::new(part.cloned(), columns);
    let mut step_index = 0usize;
    let mut current = initial.clone();
    // initial couplings on non-edges of the first network are masked out
    for ((i, j), k) in current.couplings.indexed_iter_mut() {
        if !first.has_edge(i, j) {
            *k = 0.0;
        }
    }
    traj.record(0.0, current.clone());

    for &(net, end_step) in segments {
        let sys = FullSystem::new(net, pp);
        let mut y = current.pack(&sys.edges);
        let mut rk = Rk4::new(sys.dim());
        let unpack = |y: &[f64]| {
            let mut couplings = Array2::zeros((n, n));
            for (e, &(i, j)) in sys.edges.iter().enumerate() {
                couplings[[i, j]] = y[n + e];
            }
            NetworkState {
                phases: y[..n].to_vec(),
                couplings,
            }
        };
        while step_index < end_step {
            let t = step_index as f64 * h;
            rk.step(|_, y, dy| sys.eval(y, dy), t, &mut y, h);
            if y.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite { last_valid_time: t });
            }
            for theta in &mut y[..n] {
                *theta = wrap_phase(*theta);
            }
            step_index += 1;
            if step_index.is_multiple_of(config.record_stride) {
                traj.record(step_index as f64 * h, unpack(&y));
            }
        }
        current = unpack(&y);
    }
    traj.set_final_edges(
        segments
            .last()
            .map(|(net, _)| net.edges())
            .unwrap_or_default(),
    );
    Ok(traj)
}

/// Couplings drawn uniformly from `[low, high]` per edge, in row-major edge
/// order, from a SplitMix64 stream seeded with `seed`.
pub fn random_couplings(net: &OscillatorNetwork, low: f64, high: f64, seed: u64) -> Array2<f64> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let n = net.n_nodes();
    let mut k = Array2::zeros((n, n));
    for (i, j) in net.edges() {
        k[[i, j]] = if high > low {
            rng.random_range(low..=high)
        } else {
            low
        };
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn pair_net(w: [f64; 2]) -> OscillatorNetwork {
        OscillatorNetwork::complete(w.to_vec()).unwrap()
    }

    #[test]
    fn rhs_at_rest() {
        let net = pair_net([1.0, 1.0]);
        let pp = PlasticityParams::hebbian(1.0, 0.01).unwrap();
        let s = NetworkState::new(&net, vec![0.0, 0.0], Array2::zeros((2, 2))).unwrap();
        let d = rhs_full(&net, &pp, &s).unwrap();
        assert_eq!(d.phase_rates, vec![1.0, 1.0]);
        assert_eq!(d.coupling_rates[[0, 1]], 0.01);
        assert_eq!(d.coupling_rates[[1, 0]], 0.01);
        assert_eq!(d.coupling_rates[[0, 0]], 0.0);
    }

    #[test]
    fn rhs_single_node() {
        let net = OscillatorNetwork::from_rows(&[vec![0]], vec![0.7]).unwrap();
        let pp = PlasticityParams::hebbian(1.0, 0.01).unwrap();
        let s = NetworkState::new(&net, vec![2.0], Array2::zeros((1, 1))).unwrap();
        let d = rhs_full(&net, &pp, &s).unwrap();
        assert_eq!(d.phase_rates, vec![0.7]);
        assert_eq!(d.coupling_rates[[0, 0]], 0.0);
    }

    #[test]
    fn rhs_anti_phase_coupling_decay() {
        let net = pair_net([1.0, 1.0]);
        let (mu, gamma) = (0.01, 1.0);
        let pp = PlasticityParams::hebbian(gamma, mu).unwrap();
        let s = NetworkState::from_edges(&net, vec![0.0, PI], |_, _| mu / gamma).unwrap();
        let d = rhs_full(&net, &pp, &s).unwrap();
        assert_abs_diff_eq!(d.coupling_rates[[0, 1]], -2.0 * mu, epsilon = 1e-17);
        assert_abs_diff_eq!(d.coupling_rates[[1, 0]], -2.0 * mu, epsilon = 1e-17);
    }

    #[test]
    fn non_edge_couplings_are_cleared() {
        let net = OscillatorNetwork::from_rows(&[vec![0, 1], vec![0, 0]], vec![1.0, 1.0]).unwrap();
        let s = NetworkState::new(&net, vec![0.0, 7.0], Array2::from_elem((2, 2), 0.5)).unwrap();
        assert_eq!(s.couplings[[1, 0]], 0.0);
        assert_eq!(s.couplings[[0, 1]], 0.5);
        assert!((s.phases[1] - (7.0 - 2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn times_are_uniform_and_blow_up_is_reported() {
        let net = pair_net([1.0, 1.2]);
        let pp = PlasticityParams::hebbian(1.0, 0.01).unwrap();
        let s = NetworkState::new(&net, vec![0.0, 1.0], Array2::zeros((2, 2))).unwrap();
        let traj = simulate(&net, &pp, &s, SimConfig::new(1.0, 0.01, 10), None).unwrap();
        assert_eq!(traj.len(), 11);
        for (k, &t) in traj.times().iter().enumerate() {
            assert_abs_diff_eq!(t, 0.1 * k as f64, epsilon = 1e-12);
        }
        let huge = NetworkState::from_edges(&net, vec![0.0, 1.0], |_, _| 1e306).unwrap();
        let stiff = PlasticityParams::hebbian(1e300, 0.01).unwrap();
        let err = simulate(&net, &stiff, &huge, SimConfig::new(1.0, 0.5, 1), None).unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
        assert!(simulate(&net, &pp, &s, SimConfig::new(1.0, 0.0, 1), None).is_err());
    }

    #[test]
    fn seeded_couplings_are_reproducible_and_bounded() {
        let net = OscillatorNetwork::complete(vec![1.0; 5]).unwrap();
        let a = random_couplings(&net, -0.015, 0.015, 7);
        let b = random_couplings(&net, -0.015, 0.015, 7);
        let c = random_couplings(&net, -0.015, 0.015, 8);
        assert_eq!(a, b);
        assert_ne!(a, c);
        for ((i, j), &k) in a.indexed_iter() {
            if i == j {
                assert_eq!(k, 0.0);
            } else {
                assert!((-0.015..=0.015).contains(&k));
            }
        }
    }
}
