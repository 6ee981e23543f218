//! The network restricted to its cluster-synchronous manifold `e ≡ 0`:
//!
//! ```text
//! φ̇       = w̄ + B(φ) k_inter
//! k̇_inter = −γ k_inter + μ G(φ)
//! ```
//!
//! `B` is `m × c_out` with entries `sin(φ_r − φ_s)` on the inter-cluster
//! links received by representatives; `G` has entry `Γ(φ_r − φ_s)` for every
//! inter-cluster link `i ∈ P_s ← j ∈ P_r`.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::network::{compute_cardinalities, ClusterPartition, OscillatorNetwork};
use crate::plasticity::PlasticityParams;

/// Representative phases and inter-cluster couplings (canonical edge order).
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedState {
    pub phi: Vec<f64>,
    pub k_inter: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ReducedSystem {
    pp: PlasticityParams,
    w_bar: Vec<f64>,
    /// Inter-cluster edges `(receiver, source)`, row-major.
    inter_edges: Vec<(usize, usize)>,
    /// `(s, r)`: receiving and source cluster of each inter-cluster edge.
    edge_clusters: Vec<(usize, usize)>,
    /// Edge indices whose receiver is a representative; these are the
    /// non-zero columns of `B`.
    rep_edges: Vec<usize>,
}

impl ReducedSystem {
    pub fn new(
        net: &OscillatorNetwork,
        part: &ClusterPartition,
        pp: &PlasticityParams,
    ) -> Result<Self> {
        let card = compute_cardinalities(net, part)?;
        if !card.a2_holds {
            return Err(Error::A2Violated);
        }
        let w_bar = part
            .representatives()
            .iter()
            .map(|&i| net.frequencies()[i])
            .collect();
        let inter_edges: Vec<(usize, usize)> = net
            .edges()
            .into_iter()
            .filter(|&(i, j)| !part.same_cluster(i, j))
            .collect();
        let edge_clusters = inter_edges
            .iter()
            .map(|&(i, j)| (part.cluster_of(i), part.cluster_of(j)))
            .collect();
        let rep_edges = inter_edges
            .iter()
            .enumerate()
            .filter(|(_, &(i, _))| part.is_representative(i))
            .map(|(e, _)| e)
            .collect();
        Ok(Self {
            pp: pp.clone(),
            w_bar,
            inter_edges,
            edge_clusters,
            rep_edges,
        })
    }

    /// Number of clusters.
    pub fn m(&self) -> usize {
        self.w_bar.len()
    }

    pub fn c_out(&self) -> usize {
        self.inter_edges.len()
    }

    pub fn w_bar(&self) -> &[f64] {
        &self.w_bar
    }

    pub fn params(&self) -> &PlasticityParams {
        &self.pp
    }

    pub fn inter_edges(&self) -> &[(usize, usize)] {
        &self.inter_edges
    }

    pub fn edge_clusters(&self) -> &[(usize, usize)] {
        &self.edge_clusters
    }

    pub fn representative_edges(&self) -> &[usize] {
        &self.rep_edges
    }

    pub fn b_matrix(&self, phi: &[f64]) -> Array2<f64> {
        let mut b = Array2::zeros((self.m(), self.c_out()));
        for &e in &self.rep_edges {
            let (s, r) = self.edge_clusters[e];
            b[[s, e]] = (phi[r] - phi[s]).sin();
        }
        b
    }

    pub fn g_vector(&self, phi: &[f64]) -> Vec<f64> {
        self.edge_clusters
            .iter()
            .map(|&(s, r)| self.pp.learn(phi[r] - phi[s]))
            .collect()
    }

    /// `w̄ + B(φ) k` written into `out`. `coupling(e)` supplies component `e`
    /// of the inter-cluster coupling vector; only representative edges are
    /// queried.
    #[inline]
    pub fn torus_velocity_with(
        &self,
        phi: &[f64],
        mut coupling: impl FnMut(usize) -> f64,
        out: &mut [f64],
    ) {
        out.copy_from_slice(&self.w_bar);
        for &e in &self.rep_edges {
            let (s, r) = self.edge_clusters[e];
            out[s] += coupling(e) * (phi[r] - phi[s]).sin();
        }
    }

    pub fn rhs(&self, state: &ReducedState) -> Result<ReducedState> {
        if state.phi.len() != self.m() || state.k_inter.len() != self.c_out() {
            return Err(Error::Dimension(format!(
                "reduced state has {} phases and {} couplings, expected {} and {}",
                state.phi.len(),
                state.k_inter.len(),
                self.m(),
                self.c_out()
            )));
        }
        let mut phi_rate = vec![0.0; self.m()];
        self.torus_velocity_with(&state.phi, |e| state.k_inter[e], &mut phi_rate);
        let (gamma, mu) = (self.pp.gamma(), self.pp.mu());
        let k_rate = self
            .g_vector(&state.phi)
            .into_iter()
            .zip(&state.k_inter)
            .map(|(g, &k)| -gamma * k + mu * g)
            .collect();
        Ok(ReducedState {
            phi: phi_rate,
            k_inter: k_rate,
        })
    }
}

pub fn rhs_reduced(
    net: &OscillatorNetwork,
    part: &ClusterPartition,
    pp: &PlasticityParams,
    state: &ReducedState,
) -> Result<ReducedState> {
    ReducedSystem::new(net, part, pp)?.rhs(state)
}
