//! Oscillator graphs, cluster partitions and the combinatorial quantities
//! the existence conditions are stated in.
//!
//! Edge convention: `a[i][j] == 1` means node `i` *receives* input from node
//! `j`, matching the sum over `j` in `θ̇_i = w_i + Σ_j a_ij k_ij sin(θ_j − θ_i)`.
//! Every count in this module ("incoming links of node i") follows it.
//!
//! Node indices are 0-based in the API and 1-based in configuration files.

use std::fmt;
use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Directed 0/1 graph without self-loops plus one natural frequency per node.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorNetwork {
    adjacency: Array2<u8>,
    frequencies: Vec<f64>,
}

impl OscillatorNetwork {
    pub fn new(adjacency: Array2<u8>, frequencies: Vec<f64>) -> Result<Self> {
        let (rows, cols) = adjacency.dim();
        if rows != cols {
            return Err(Error::Dimension(format!(
                "adjacency is {rows}x{cols}, expected a square matrix"
            )));
        }
        if frequencies.len() != rows {
            return Err(Error::Dimension(format!(
                "{} frequencies for {rows} nodes",
                frequencies.len()
            )));
        }
        if rows == 0 {
            return Err(Error::Dimension("network has no nodes".into()));
        }
        for ((i, j), &a) in adjacency.indexed_iter() {
            if a > 1 {
                return Err(Error::NonBinary {
                    row: i,
                    col: j,
                    value: a as i64,
                });
            }
            if i == j && a != 0 {
                return Err(Error::SelfLoop(i));
            }
        }
        Ok(Self {
            adjacency,
            frequencies,
        })
    }

    /// Builds a network from integer rows, rejecting anything outside {0, 1}.
    pub fn from_rows(rows: &[Vec<i64>], frequencies: Vec<f64>) -> Result<Self> {
        let n = rows.len();
        let mut adjacency = Array2::<u8>::zeros((n, n));
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v != 0 && v != 1 {
                    return Err(Error::NonBinary {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
                if i == j && v == 1 {
                    return Err(Error::SelfLoop(i));
                }
                adjacency[[i, j]] = v as u8;
            }
        }
        Self::new(adjacency, frequencies)
    }

    /// All-to-all directed graph on `frequencies.len()` nodes.
    pub fn complete(frequencies: Vec<f64>) -> Result<Self> {
        let n = frequencies.len();
        let adjacency = Array2::from_shape_fn((n, n), |(i, j)| u8::from(i != j));
        Self::new(adjacency, frequencies)
    }

    pub fn n_nodes(&self) -> usize {
        self.frequencies.len()
    }

    pub fn adjacency(&self) -> &Array2<u8> {
        &self.adjacency
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    /// True when node `i` receives from node `j`.
    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[[i, j]] == 1
    }

    /// Edges `(receiver, source)` in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .indexed_iter()
            .filter(|(_, &a)| a == 1)
            .map(|(ij, _)| ij)
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().filter(|&&a| a == 1).count()
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.adjacency
            .outer_iter()
            .map(|row| row.iter().map(|&a| a as i64).collect())
            .collect()
    }
}

/// Disjoint cover of the node set by `m >= 2` non-empty clusters, each with a
/// designated representative node.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterPartition {
    clusters: Vec<Vec<usize>>,
    representatives: Vec<usize>,
    membership: Vec<usize>,
}

impl ClusterPartition {
    /// Representatives default to the smallest node index of each cluster.
    pub fn new(n_nodes: usize, clusters: Vec<Vec<usize>>) -> Result<Self> {
        let representatives = clusters
            .iter()
            .map(|c| c.iter().copied().min().unwrap_or(usize::MAX))
            .collect();
        Self::with_representatives(n_nodes, clusters, representatives)
    }

    pub fn with_representatives(
        n_nodes: usize,
        clusters: Vec<Vec<usize>>,
        representatives: Vec<usize>,
    ) -> Result<Self> {
        if clusters.len() < 2 {
            return Err(Error::Partition(format!(
                "need at least two clusters, got {}",
                clusters.len()
            )));
        }
        if representatives.len() != clusters.len() {
            return Err(Error::Partition(format!(
                "{} representatives for {} clusters",
                representatives.len(),
                clusters.len()
            )));
        }
        let mut membership = vec![usize::MAX; n_nodes];
        let mut clusters = clusters;
        for (s, cluster) in clusters.iter_mut().enumerate() {
            if cluster.is_empty() {
                return Err(Error::Partition(format!("cluster {} is empty", s + 1)));
            }
            cluster.sort_unstable();
            for &i in cluster.iter() {
                if i >= n_nodes {
                    return Err(Error::Partition(format!(
                        "node {} out of range for {n_nodes} nodes",
                        i + 1
                    )));
                }
                if membership[i] != usize::MAX {
                    return Err(Error::Partition(format!(
                        "node {} appears in more than one cluster",
                        i + 1
                    )));
                }
                membership[i] = s;
            }
        }
        if let Some(i) = membership.iter().position(|&s| s == usize::MAX) {
            return Err(Error::Partition(format!(
                "node {} is not covered by the partition",
                i + 1
            )));
        }
        for (s, &rep) in representatives.iter().enumerate() {
            if rep >= n_nodes || membership[rep] != s {
                return Err(Error::Partition(format!(
                    "representative {} is not a member of cluster {}",
                    rep.wrapping_add(1),
                    s + 1
                )));
            }
        }
        Ok(Self {
            clusters,
            representatives,
            membership,
        })
    }

    /// Number of clusters `m`.
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn n_nodes(&self) -> usize {
        self.membership.len()
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn cluster(&self, s: usize) -> &[usize] {
        &self.clusters[s]
    }

    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn representative(&self, s: usize) -> usize {
        self.representatives[s]
    }

    /// Index of the cluster containing node `i`.
    #[inline]
    pub fn cluster_of(&self, i: usize) -> usize {
        self.membership[i]
    }

    pub fn is_representative(&self, i: usize) -> bool {
        self.representatives[self.membership[i]] == i
    }

    /// Non-representative nodes in increasing index order; these carry the
    /// intra-cluster error coordinates.
    pub fn error_nodes(&self) -> Vec<usize> {
        (0..self.n_nodes())
            .filter(|&i| !self.is_representative(i))
            .collect()
    }

    pub fn same_cluster(&self, i: usize, j: usize) -> bool {
        self.membership[i] == self.membership[j]
    }

    pub(crate) fn check_fits(&self, n_nodes: usize) -> Result<()> {
        if self.n_nodes() != n_nodes {
            return Err(Error::Partition(format!(
                "partition covers {} nodes, network has {n_nodes}",
                self.n_nodes()
            )));
        }
        Ok(())
    }
}

/// Nodes of one cluster whose incoming counts from another cluster disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct A2Violation {
    /// Receiving cluster (0-based).
    pub cluster: usize,
    /// Source cluster (0-based).
    pub source_cluster: usize,
    /// `(node, incoming count)` for every node of the receiving cluster.
    pub counts: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CardinalityReport {
    pub c_in: usize,
    pub c_out: usize,
    /// `c_sr[s][r]`: incoming links of each node of cluster `s` from cluster
    /// `r`. When (A2) fails this holds the per-pair maximum over nodes and is
    /// for display only. The diagonal is unused and kept at zero.
    pub c_sr: Vec<Vec<usize>>,
    /// `per_node_incoming[i][r]`: links node `i` receives from cluster `r`.
    pub per_node_incoming: Vec<Vec<usize>>,
    pub c_max: usize,
    pub a2_holds: bool,
    pub violations: Vec<A2Violation>,
}

impl CardinalityReport {
    /// `Σ_{s≠r} c_sr`.
    pub fn sum_c_sr(&self) -> usize {
        self.c_sr
            .iter()
            .enumerate()
            .flat_map(|(s, row)| row.iter().enumerate().filter(move |(r, _)| *r != s))
            .map(|(_, &c)| c)
            .sum()
    }
}

pub fn compute_cardinalities(
    net: &OscillatorNetwork,
    part: &ClusterPartition,
) -> Result<CardinalityReport> {
    part.check_fits(net.n_nodes())?;
    Ok(cardinalities_with(net.n_nodes(), part, |i, j| {
        net.has_edge(i, j)
    }))
}

/// Counting core shared by the plain and the perturbed route.
pub(crate) fn cardinalities_with(
    n: usize,
    part: &ClusterPartition,
    edge: impl Fn(usize, usize) -> bool,
) -> CardinalityReport {
    let m = part.len();
    let mut c_in = 0;
    let mut c_out = 0;
    let mut per_node_incoming = vec![vec![0usize; m]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j || !edge(i, j) {
                continue;
            }
            if part.same_cluster(i, j) {
                c_in += 1;
            } else {
                c_out += 1;
            }
            per_node_incoming[i][part.cluster_of(j)] += 1;
        }
    }

    let mut c_sr = vec![vec![0usize; m]; m];
    let mut violations = Vec::new();
    for s in 0..m {
        for r in 0..m {
            if r == s {
                continue;
            }
            let counts: Vec<(usize, usize)> = part
                .cluster(s)
                .iter()
                .map(|&i| (i, per_node_incoming[i][r]))
                .collect();
            let first = counts[0].1;
            c_sr[s][r] = counts.iter().map(|&(_, c)| c).max().unwrap_or(0);
            if counts.iter().any(|&(_, c)| c != first) {
                violations.push(A2Violation {
                    cluster: s,
                    source_cluster: r,
                    counts,
                });
            }
        }
    }
    let c_max = (0..m)
        .map(|s| {
            (0..m)
                .filter(|&r| r != s)
                .map(|r| c_sr[s][r])
                .sum::<usize>()
        })
        .max()
        .unwrap_or(0);

    CardinalityReport {
        c_in,
        c_out,
        c_sr,
        per_node_incoming,
        c_max,
        a2_holds: violations.is_empty(),
        violations,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct A1Report {
    pub holds: bool,
    /// `(cluster, (i, j))` for every pair inside a cluster whose frequencies
    /// differ by more than the tolerance.
    pub violations: Vec<(usize, (usize, usize))>,
}

/// Equal natural frequencies inside every cluster. `tolerance == 0.0`
/// demands exact equality of the stored values.
pub fn check_a1(
    net: &OscillatorNetwork,
    part: &ClusterPartition,
    tolerance: f64,
) -> Result<A1Report> {
    part.check_fits(net.n_nodes())?;
    let w = net.frequencies();
    let mut violations = Vec::new();
    for (s, cluster) in part.clusters().iter().enumerate() {
        for (a, &i) in cluster.iter().enumerate() {
            for &j in &cluster[a + 1..] {
                let differs = if tolerance == 0.0 {
                    w[i] != w[j]
                } else {
                    (w[i] - w[j]).abs() > tolerance
                };
                if differs {
                    violations.push((s, (i, j)));
                }
            }
        }
    }
    Ok(A1Report {
        holds: violations.is_empty(),
        violations,
    })
}

/// Signed edit mask on an adjacency matrix: `+1` adds a link, `-1` removes
/// one, `0` leaves the entry alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerturbationMatrix {
    entries: Array2<i8>,
}

impl PerturbationMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            entries: Array2::zeros((n, n)),
        }
    }

    pub fn new(entries: Array2<i8>) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows != cols {
            return Err(Error::Dimension(format!(
                "perturbation is {rows}x{cols}, expected a square matrix"
            )));
        }
        for ((i, j), &v) in entries.indexed_iter() {
            if !(-1..=1).contains(&v) {
                return Err(Error::Perturbation {
                    row: i,
                    col: j,
                    reason: format!("entry {v} outside {{-1, 0, 1}}"),
                });
            }
            if i == j && v != 0 {
                return Err(Error::Perturbation {
                    row: i,
                    col: j,
                    reason: "diagonal entries must be zero".into(),
                });
            }
        }
        Ok(Self { entries })
    }

    /// From `(receiver, source, ±1)` triples with 0-based indices.
    pub fn from_sparse(n: usize, edits: &[(usize, usize, i8)]) -> Result<Self> {
        let mut entries = Array2::zeros((n, n));
        for &(i, j, v) in edits {
            if i >= n || j >= n {
                return Err(Error::Dimension(format!(
                    "edit ({}, {}) outside a {n}-node network",
                    i + 1,
                    j + 1
                )));
            }
            entries[[i, j]] = v;
        }
        Self::new(entries)
    }

    pub fn n_nodes(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<i8> {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[[i, j]]
    }

    pub fn edit_count(&self) -> usize {
        self.entries.iter().filter(|&&v| v != 0).count()
    }

    /// Non-zero entries as `(receiver, source, value)`, row-major.
    pub fn to_sparse(&self) -> Vec<(usize, usize, i8)> {
        self.entries
            .indexed_iter()
            .filter(|(_, &v)| v != 0)
            .map(|((i, j), &v)| (i, j, v))
            .collect()
    }

    /// Checks the add-only-where-absent / remove-only-where-present rule.
    pub fn validate_for(&self, net: &OscillatorNetwork) -> Result<()> {
        if self.n_nodes() != net.n_nodes() {
            return Err(Error::Dimension(format!(
                "perturbation is {}x{0}, network has {} nodes",
                self.n_nodes(),
                net.n_nodes()
            )));
        }
        for ((i, j), &v) in self.entries.indexed_iter() {
            let present = net.has_edge(i, j);
            if v == 1 && present {
                return Err(Error::Perturbation {
                    row: i,
                    col: j,
                    reason: "adds a link that already exists".into(),
                });
            }
            if v == -1 && !present {
                return Err(Error::Perturbation {
                    row: i,
                    col: j,
                    reason: "removes a link that does not exist".into(),
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for PerturbationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edits = self.to_sparse();
        if edits.is_empty() {
            return write!(f, "no edits");
        }
        for (k, (i, j, v)) in edits.into_iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "a~[{},{}] = {v:+}", i + 1, j + 1)?;
        }
        Ok(())
    }
}

/// Returns the network with adjacency `A + Ã`.
pub fn apply_perturbation(
    net: &OscillatorNetwork,
    tilde_a: &PerturbationMatrix,
) -> Result<OscillatorNetwork> {
    tilde_a.validate_for(net)?;
    let adjacency = Array2::from_shape_fn(net.adjacency().dim(), |(i, j)| {
        (net.adjacency()[[i, j]] as i8 + tilde_a.get(i, j)) as u8
    });
    OscillatorNetwork::new(adjacency, net.frequencies().to_vec())
}

/// On-disk form of a network with its partition. Node indices are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfig {
    pub adjacency: Vec<Vec<i64>>,
    pub frequencies: Vec<f64>,
    pub partition: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representatives: Option<Vec<usize>>,
}

impl NetworkConfig {
    pub fn from_parts(net: &OscillatorNetwork, part: &ClusterPartition) -> Self {
        let one_based = |v: &[usize]| v.iter().map(|i| i + 1).collect::<Vec<_>>();
        let default_reps = part
            .clusters()
            .iter()
            .zip(part.representatives())
            .all(|(c, &rep)| c[0] == rep);
        Self {
            adjacency: net.rows(),
            frequencies: net.frequencies().to_vec(),
            partition: part.clusters().iter().map(|c| one_based(c)).collect(),
            representatives: (!default_reps).then(|| one_based(part.representatives())),
        }
    }

    pub fn network(&self) -> Result<OscillatorNetwork> {
        OscillatorNetwork::from_rows(&self.adjacency, self.frequencies.clone())
    }

    pub fn partition(&self) -> Result<ClusterPartition> {
        let n = self.adjacency.len();
        let zero_based = |v: &[usize]| -> Result<Vec<usize>> {
            v.iter()
                .map(|&i| {
                    i.checked_sub(1)
                        .ok_or_else(|| Error::Partition("node indices are 1-based; found 0".into()))
                })
                .collect()
        };
        let clusters = self
            .partition
            .iter()
            .map(|c| zero_based(c))
            .collect::<Result<Vec<_>>>()?;
        match &self.representatives {
            Some(reps) => ClusterPartition::with_representatives(n, clusters, zero_based(reps)?),
            None => ClusterPartition::new(n, clusters),
        }
    }

    pub fn parts(&self) -> Result<(OscillatorNetwork, ClusterPartition)> {
        let net = self.network()?;
        let part = self.partition()?;
        part.check_fits(net.n_nodes())?;
        Ok((net, part))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}
