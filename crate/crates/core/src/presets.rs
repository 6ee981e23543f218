//! Reference networks used throughout the examples and tests.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

use crate::dynamics::{random_couplings, NetworkState};
use crate::error::Result;
use crate::network::{ClusterPartition, OscillatorNetwork, PerturbationMatrix};
use crate::plasticity::PlasticityParams;

#[derive(Debug, Clone)]
pub struct Preset {
    pub network: OscillatorNetwork,
    pub partition: ClusterPartition,
    pub plasticity: PlasticityParams,
}

/// Five all-to-all nodes split `{1,2,3} ∪ {4,5}`, `γ = 1`, `μ = 0.01`.
pub fn five_node() -> Preset {
    let w2 = 2f64.sqrt() / 3.0;
    Preset {
        network: OscillatorNetwork::complete(vec![0.5, 0.5, 0.5, w2, w2]).expect("valid network"),
        partition: ClusterPartition::new(5, vec![vec![0, 1, 2], vec![3, 4]])
            .expect("valid partition"),
        plasticity: PlasticityParams::hebbian(1.0, 0.01).expect("valid parameters"),
    }
}

pub const FIVE_NODE_PHASES: [f64; 5] = [FRAC_PI_2, FRAC_PI_2 + 0.15, FRAC_PI_2 + 0.25, 0.0, -0.1];

/// Staggered phases and couplings drawn uniformly from `[−0.015, 0.015]`.
pub fn five_node_initial(seed: u64) -> Result<NetworkState> {
    let p = five_node();
    NetworkState::new(
        &p.network,
        FIVE_NODE_PHASES.to_vec(),
        random_couplings(&p.network, -0.015, 0.015, seed),
    )
}

pub fn seven_node_rows() -> Vec<Vec<i64>> {
    vec![
        vec![0, 1, 0, 0, 1, 0, 0],
        vec![0, 0, 1, 0, 0, 0, 1],
        vec![1, 0, 0, 1, 0, 0, 0],
        vec![0, 1, 0, 0, 1, 0, 0],
        vec![0, 1, 0, 0, 0, 1, 0],
        vec![0, 0, 1, 0, 0, 0, 1],
        vec![1, 0, 1, 1, 0, 0, 0],
    ]
}

fn seven_node_with(rows: Vec<Vec<i64>>) -> Preset {
    let w2 = 0.8f64.sqrt();
    Preset {
        network: OscillatorNetwork::from_rows(&rows, vec![0.5, 0.5, 0.5, w2, w2, w2, w2])
            .expect("valid network"),
        partition: ClusterPartition::new(7, vec![vec![0, 1, 2], vec![3, 4, 5, 6]])
            .expect("valid partition"),
        plasticity: PlasticityParams::hebbian(0.2, 0.001).expect("valid parameters"),
    }
}

/// Seven nodes split `{1,2,3} ∪ {4,5,6,7}`; node 7 hears two nodes of the
/// first cluster, so the in-degree condition fails. `γ = 0.2`, `μ = 0.001`.
pub fn seven_node_original() -> Preset {
    seven_node_with(seven_node_rows())
}

/// Node 7 no longer hears node 1.
pub fn seven_node_removal() -> PerturbationMatrix {
    PerturbationMatrix::from_sparse(7, &[(6, 0, -1)]).expect("valid perturbation")
}

/// The original network with [`seven_node_removal`] applied.
pub fn seven_node_fixed() -> Preset {
    let mut rows = seven_node_rows();
    rows[6][0] = 0;
    seven_node_with(rows)
}

/// Zero intra-cluster errors, unit intra-cluster couplings and no
/// inter-cluster coupling.
pub fn seven_node_synchronous_start(
    net: &OscillatorNetwork,
    part: &ClusterPartition,
) -> Result<NetworkState> {
    let phases = (0..7)
        .map(|i| {
            if part.cluster_of(i) == 0 {
                FRAC_PI_2
            } else {
                FRAC_PI_3
            }
        })
        .collect();
    NetworkState::from_edges(
        net,
        phases,
        |i, j| if part.same_cluster(i, j) { 1.0 } else { 0.0 },
    )
}

pub const SEVEN_NODE_PHASES: [f64; 7] = [
    FRAC_PI_2,
    FRAC_PI_2 + 0.15,
    FRAC_PI_2 + 0.25,
    FRAC_PI_3 - 0.1,
    FRAC_PI_3 - 0.2,
    FRAC_PI_3 - 0.3,
    FRAC_PI_3 - 0.4,
];

/// Staggered phases and couplings drawn uniformly from `[−0.015, 0.015]`.
pub fn seven_node_initial(net: &OscillatorNetwork, seed: u64) -> Result<NetworkState> {
    NetworkState::new(
        net,
        SEVEN_NODE_PHASES.to_vec(),
        random_couplings(net, -0.015, 0.015, seed),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::apply_perturbation;

    #[test]
    fn fixed_network_is_the_perturbed_original() {
        let orig = seven_node_original();
        let fixed = seven_node_fixed();
        let perturbed = apply_perturbation(&orig.network, &seven_node_removal()).unwrap();
        assert_eq!(perturbed, fixed.network);
        assert_eq!(fixed.network.edge_count(), orig.network.edge_count() - 1);
    }
}
