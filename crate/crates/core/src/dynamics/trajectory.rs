use std::io::Write;

use serde::{Deserialize, Serialize};

use super::full::NetworkState;
use crate::error::{Error, Result};
use crate::network::ClusterPartition;

/// Recorded samples of a simulation run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<NetworkState>,
    errors: Vec<Vec<f64>>,
    partition: Option<ClusterPartition>,
    error_nodes: Vec<usize>,
    coupling_columns: Vec<(usize, usize)>,
    final_edges: Vec<(usize, usize)>,
}

impl Trajectory {
    pub(crate) fn new(
        partition: Option<ClusterPartition>,
        coupling_columns: Vec<(usize, usize)>,
    ) -> Self {
        let error_nodes = partition
            .as_ref()
            .map(|p| p.error_nodes())
            .unwrap_or_default();
        Self {
            times: Vec::new(),
            states: Vec::new(),
            errors: Vec::new(),
            partition,
            error_nodes,
            coupling_columns,
            final_edges: Vec::new(),
        }
    }

    pub(crate) fn record(&mut self, t: f64, state: NetworkState) {
        if let Some(p) = &self.partition {
            self.errors.push(state.cluster_errors(p));
        }
        self.times.push(t);
        self.states.push(state);
    }

    pub(crate) fn set_final_edges(&mut self, edges: Vec<(usize, usize)>) {
        self.final_edges = edges;
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[NetworkState] {
        &self.states
    }

    pub fn last_state(&self) -> Option<&NetworkState> {
        self.states.last()
    }

    /// Intra-cluster errors per sample, empty without a partition.
    pub fn errors(&self) -> &[Vec<f64>] {
        &self.errors
    }

    /// Node carrying each error column.
    pub fn error_nodes(&self) -> &[usize] {
        &self.error_nodes
    }

    pub fn partition(&self) -> Option<&ClusterPartition> {
        self.partition.as_ref()
    }

    /// Edges active in the last integrated segment.
    pub fn final_edges(&self) -> &[(usize, usize)] {
        &self.final_edges
    }

    /// `max_i |e_i|` per sample.
    pub fn max_abs_errors(&self) -> Vec<f64> {
        self.errors
            .iter()
            .map(|e| e.iter().fold(0.0f64, |a, v| a.max(v.abs())))
            .collect()
    }

    /// CSV with columns `t, theta_1..theta_N, e_<node>..., k_<i>_<j>...`
    /// (1-based node labels).
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let n = self.states.first().map(|s| s.n_nodes()).unwrap_or(0);
        let mut header = vec!["t".to_string()];
        header.extend((1..=n).map(|i| format!("theta_{i}")));
        header.extend(self.error_nodes.iter().map(|i| format!("e_{}", i + 1)));
        header.extend(
            self.coupling_columns
                .iter()
                .map(|(i, j)| format!("k_{}_{}", i + 1, j + 1)),
        );
        writeln!(out, "{}", header.join(","))?;
        for (idx, (t, s)) in self.times.iter().zip(&self.states).enumerate() {
            let mut row = vec![t.to_string()];
            row.extend(s.phases.iter().map(f64::to_string));
            if let Some(e) = self.errors.get(idx) {
                row.extend(e.iter().map(f64::to_string));
            }
            row.extend(
                self.coupling_columns
                    .iter()
                    .map(|&(i, j)| s.couplings[[i, j]].to_string()),
            );
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingLimit {
    pub receiver: usize,
    pub source: usize,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorMetrics {
    /// `max_i |e_i|` over the last 5% of samples.
    pub sup_final_error: f64,
    /// `max_i |e_i|` over the whole run.
    pub peak_error: f64,
    pub tolerance: f64,
    /// First sample time after which `max_i |e_i|` stays below `tolerance`.
    pub time_to_tolerance: Option<f64>,
    /// Mean of each intra-cluster coupling over the last 5% of samples.
    pub intra_coupling_limits: Vec<CouplingLimit>,
}

pub fn error_metrics(traj: &Trajectory, tolerance: f64) -> Result<ErrorMetrics> {
    let part = traj
        .partition()
        .ok_or_else(|| Error::Trajectory("trajectory was recorded without a partition".into()))?;
    if traj.is_empty() {
        return Err(Error::Trajectory("trajectory has no samples".into()));
    }
    let len = traj.len();
    let tail_start = len - ((len as f64 * 0.05).ceil() as usize).clamp(1, len);
    let max_err = traj.max_abs_errors();

    let sup_final_error = max_err[tail_start..].iter().fold(0.0f64, |a, &v| a.max(v));
    let peak_error = max_err.iter().fold(0.0f64, |a, &v| a.max(v));
    let time_to_tolerance = match max_err.iter().rposition(|&v| v >= tolerance) {
        None => Some(traj.times()[0]),
        Some(k) if k + 1 < len => Some(traj.times()[k + 1]),
        Some(_) => None,
    };

    let tail = &traj.states()[tail_start..];
    let intra_coupling_limits = traj
        .final_edges()
        .iter()
        .filter(|&&(i, j)| part.same_cluster(i, j))
        .map(|&(i, j)| CouplingLimit {
            receiver: i,
            source: j,
            mean: tail.iter().map(|s| s.couplings[[i, j]]).sum::<f64>() / tail.len() as f64,
        })
        .collect();

    Ok(ErrorMetrics {
        sup_final_error,
        peak_error,
        tolerance,
        time_to_tolerance,
        intra_coupling_limits,
    })
}
