//! Cluster synchronization of Kuramoto networks with adaptive (plastic)
//! couplings.
//!
//! The crate checks the sufficient conditions for a partition of an
//! oscillator network into clusters to be exponentially stable, simulates the
//! full and reduced dynamics, builds the invariant torus of inter-cluster
//! couplings by successive approximation, and searches for minimal topology
//! edits that make a partition admissible.

pub mod conditions;
pub mod design;
pub mod dynamics;
pub mod error;
pub mod integrate;
pub mod network;
pub mod plasticity;
pub mod presets;
pub mod scenario;
pub mod torus;

pub use conditions::{
    check_conditions, check_conditions_with_tolerance, check_corollary, contraction_ratio,
    ConditionReport,
};
pub use design::{design_topology, min_edits_for_targets, DesignResult};
pub use dynamics::{
    error_metrics, random_couplings, rhs_full, rhs_reduced, simulate, switch_topology_scenario,
    two_oscillator_static_analysis, ErrorMetrics, NetworkState, ReducedState, ReducedSystem,
    SimConfig, Trajectory,
};
pub use error::{Error, Result};
pub use network::{
    apply_perturbation, check_a1, compute_cardinalities, CardinalityReport, ClusterPartition,
    NetworkConfig, OscillatorNetwork, PerturbationMatrix,
};
pub use plasticity::{LearningRule, PlasticityParams};
pub use torus::{
    full_manifold, invariance_residual, iterate_once, solve_torus, IterationLog, TorusConfig,
    TorusFunction,
};
