//! Minimal inter-cluster rewiring that makes a partition admissible.
//!
//! A candidate is a matrix of target in-counts `c̃_sr`. Reaching it costs
//! `Σ_i |count_i(r) − c̃_sr|` flips per ordered pair, independently of the
//! other pairs, so candidates can be ranked before any of them is built.

use itertools::Itertools;
use rayon::prelude::*;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::conditions::{check_corollary, ConditionReport};
use crate::error::{Error, Result};
use crate::network::{
    check_a1, compute_cardinalities, ClusterPartition, OscillatorNetwork, PerturbationMatrix,
};
use crate::plasticity::PlasticityParams;

/// Upper limit on enumerated target matrices.
const MAX_CANDIDATES: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct DesignResult {
    pub perturbation: PerturbationMatrix,
    pub edits: usize,
    /// Chosen `c̃_sr`; the diagonal is unused and zero.
    pub targets: Vec<Vec<usize>>,
    pub report: ConditionReport,
    pub feasible: bool,
}

impl Serialize for DesignResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let sparse: Vec<[i64; 3]> = self
            .perturbation
            .to_sparse()
            .into_iter()
            .map(|(i, j, v)| [i as i64 + 1, j as i64 + 1, v as i64])
            .collect();
        let mut st = serializer.serialize_struct("DesignResult", 5)?;
        st.serialize_field("feasible", &self.feasible)?;
        st.serialize_field("edits", &self.edits)?;
        st.serialize_field("perturbation", &sparse)?;
        st.serialize_field("targets", &self.targets)?;
        st.serialize_field("report", &self.report)?;
        st.end()
    }
}

fn validate_targets(part: &ClusterPartition, targets: &[Vec<usize>]) -> Result<()> {
    let m = part.len();
    if targets.len() != m || targets.iter().any(|row| row.len() != m) {
        return Err(Error::Dimension(format!("targets must be {m}×{m}")));
    }
    for (s, row) in targets.iter().enumerate() {
        for (r, &t) in row.iter().enumerate() {
            if s != r && t > part.cluster(r).len() {
                return Err(Error::Parameter(format!(
                    "target c_{}{} = {t} exceeds the size {} of cluster {}",
                    s + 1,
                    r + 1,
                    part.cluster(r).len(),
                    r + 1
                )));
            }
        }
    }
    Ok(())
}

/// Fewest flips bringing every node of `P_s` to exactly `targets[s][r]`
/// incoming links from `P_r`. Surplus links are removed starting from the
/// lowest source index; missing ones are added from the lowest-index
/// non-neighbours. Intra-cluster entries stay zero.
pub fn min_edits_for_targets(
    net: &OscillatorNetwork,
    part: &ClusterPartition,
    targets: &[Vec<usize>],
) -> Result<PerturbationMatrix> {
    part.check_fits(net.n_nodes())?;
    validate_targets(part, targets)?;
    let mut edits = Vec::new();
    for s in 0..part.len() {
        for &i in part.cluster(s) {
            for r in (0..part.len()).filter(|&r| r != s) {
                let (linked, free): (Vec<usize>, Vec<usize>) =
                    part.cluster(r).iter().partition(|&&j| net.has_edge(i, j));
                let t = targets[s][r];
                if linked.len() > t {
                    edits.extend(linked[..linked.len() - t].iter().map(|&j| (i, j, -1)));
                } else {
                    edits.extend(free[..t - linked.len()].iter().map(|&j| (i, j, 1)));
                }
            }
        }
    }
    PerturbationMatrix::from_sparse(net.n_nodes(), &edits)
}

struct Candidate {
    cost: usize,
    c_max: usize,
    sum: usize,
    targets: Vec<Vec<usize>>,
}

/// Searches target matrices in order of edit cost, then `c̃_max`, then
/// `Σ c̃_sr`, and returns the first one passing the corollary conditions
/// within `max_edits` flips. When none passes, the candidate with the
/// smallest contraction ratio is returned with `feasible = false`.
pub fn design_topology(
    net: &OscillatorNetwork,
    part: &ClusterPartition,
    pp: &PlasticityParams,
    max_edits: usize,
) -> Result<DesignResult> {
    if !check_a1(net, part, 0.0)?.holds {
        return Err(Error::A1Violated);
    }
    let card = compute_cardinalities(net, part)?;
    let m = part.len();
    let pairs: Vec<(usize, usize)> = (0..m)
        .cartesian_product(0..m)
        .filter(|(s, r)| s != r)
        .collect();

    // per ordered pair: (target, cost) options within budget
    let options: Vec<Vec<(usize, usize)>> = pairs
        .iter()
        .map(|&(s, r)| {
            let counts: Vec<usize> = part
                .cluster(s)
                .iter()
                .map(|&i| card.per_node_incoming[i][r])
                .collect();
            let hi = part
                .cluster(r)
                .len()
                .min(counts.iter().max().copied().unwrap_or(0) + 1);
            (0..=hi)
                .map(|t| (t, counts.iter().map(|&c| c.abs_diff(t)).sum::<usize>()))
                .filter(|&(_, cost)| cost <= max_edits)
                .collect()
        })
        .collect();

    let space = options
        .iter()
        .map(Vec::len)
        .try_fold(1usize, |acc, n| acc.checked_mul(n));
    match space {
        Some(0) => {
            return Err(Error::SearchExhausted(format!(
                "no target matrix is reachable within {max_edits} edits"
            )))
        }
        Some(n) if n <= MAX_CANDIDATES => {}
        _ => {
            return Err(Error::SearchExhausted(format!(
                "more than {MAX_CANDIDATES} target matrices; lower max_edits"
            )))
        }
    }

    let choices: Vec<Vec<&(usize, usize)>> = if pairs.is_empty() {
        vec![Vec::new()]
    } else {
        options
            .iter()
            .map(|o| o.iter())
            .multi_cartesian_product()
            .collect()
    };
    let mut candidates: Vec<Candidate> = choices
        .into_iter()
        .filter_map(|choice| {
            let cost: usize = choice.iter().map(|&&(_, c)| c).sum();
            if cost > max_edits {
                return None;
            }
            let mut targets = vec![vec![0; m]; m];
            for (&(s, r), &&(t, _)) in pairs.iter().zip(&choice) {
                targets[s][r] = t;
            }
            let c_max = targets
                .iter()
                .map(|row| row.iter().sum::<usize>())
                .max()
                .unwrap_or(0);
            let sum = targets.iter().flatten().sum();
            Some(Candidate {
                cost,
                c_max,
                sum,
                targets,
            })
        })
        .collect();
    if candidates.is_empty() {
        return Err(Error::SearchExhausted(format!(
            "no target matrix is reachable within {max_edits} edits"
        )));
    }
    candidates.sort_by(|a, b| {
        (a.cost, a.c_max, a.sum, &a.targets).cmp(&(b.cost, b.c_max, b.sum, &b.targets))
    });

    let evaluate = |c: &Candidate| -> Result<DesignResult> {
        let perturbation = min_edits_for_targets(net, part, &c.targets)?;
        let report = check_corollary(net, &perturbation, part, pp)?;
        Ok(DesignResult {
            edits: perturbation.edit_count(),
            feasible: report.overall,
            perturbation,
            targets: c.targets.clone(),
            report,
        })
    };

    let hit = candidates
        .par_iter()
        .map(evaluate)
        .find_first(|r| r.as_ref().map_or(true, |d| d.feasible));
    if let Some(result) = hit {
        return result;
    }
    let mut best: Option<DesignResult> = None;
    for c in &candidates {
        let d = evaluate(c)?;
        let key = |x: &DesignResult| (!x.report.a2_holds, x.report.ratio_a3);
        if best.as_ref().is_none_or(|b| key(&d) < key(b)) {
            best = Some(d);
        }
    }
    Ok(best.expect("at least one candidate"))
}
