//! Sufficient conditions for an `m`-cluster invariant torus.
//!
//! * (A1) equal natural frequencies inside every cluster;
//! * (A2) every node of cluster `s` receives the same number `c_sr` of links
//!   from cluster `r`;
//! * (A3) `w_min − μ δ c_max / γ > 0` and the contraction ratio
//!
//!   ```text
//!   ρ = 4 μ/γ² · δ · √c_out · Σ_{s≠r} c_sr · (w_max + μ δ c_max/γ) / (w_min − μ δ c_max/γ)
//!   ```
//!
//!   is strictly below one.
//!
//! The same ratio bounds the geometric decay of successive torus
//! approximations, so [`contraction_ratio`] and the report share one
//! implementation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{
    cardinalities_with, check_a1, compute_cardinalities, CardinalityReport, ClusterPartition,
    OscillatorNetwork, PerturbationMatrix,
};
use crate::plasticity::PlasticityParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub a1_holds: bool,
    pub a2_holds: bool,
    pub a3_holds: bool,
    /// False when (A2) fails: `c_sr` is then undefined and the (A3) numbers
    /// are computed from per-pair maxima for display only.
    pub a3_applicable: bool,
    pub w_min: f64,
    pub w_max: f64,
    /// `w_min − μ δ c_max / γ`.
    pub lhs_a3: f64,
    /// Contraction ratio; `+∞` when `lhs_a3 <= 0` and `μ > 0`.
    pub ratio_a3: f64,
    pub gamma: f64,
    pub mu: f64,
    pub delta: f64,
    pub cardinalities: CardinalityReport,
    pub overall: bool,
}

/// Both (A3) quantities from already-counted structure.
pub(crate) fn a3_terms(
    w_min: f64,
    w_max: f64,
    pp: &PlasticityParams,
    c_max: usize,
    c_out: f64,
    sum_c_sr: usize,
) -> (f64, f64) {
    let (mu, gamma, delta) = (pp.mu(), pp.gamma(), pp.delta());
    let drift = mu / gamma * delta * c_max as f64;
    let lhs = w_min - drift;
    let ratio = if mu == 0.0 {
        0.0
    } else if lhs <= 0.0 {
        f64::INFINITY
    } else {
        4.0 * mu / (gamma * gamma) * delta * c_out.sqrt() * sum_c_sr as f64 * (w_max + drift) / lhs
    };
    (lhs, ratio)
}

fn frequency_extremes(net: &OscillatorNetwork) -> (f64, f64) {
    net.frequencies()
        .iter()
        .map(|w| w.abs())
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), w| {
            (lo.min(w), hi.max(w))
        })
}

fn assemble(
    a1_holds: bool,
    cardinalities: CardinalityReport,
    c_out: f64,
    net: &OscillatorNetwork,
    pp: &PlasticityParams,
) -> ConditionReport {
    let (w_min, w_max) = frequency_extremes(net);
    let (lhs_a3, ratio_a3) = a3_terms(
        w_min,
        w_max,
        pp,
        cardinalities.c_max,
        c_out,
        cardinalities.sum_c_sr(),
    );
    let a2_holds = cardinalities.a2_holds;
    let a3_holds = a2_holds && lhs_a3 > 0.0 && ratio_a3 < 1.0;
    ConditionReport {
        a1_holds,
        a2_holds,
        a3_holds,
        a3_applicable: a2_holds,
        w_min,
        w_max,
        lhs_a3,
        ratio_a3,
        gamma: pp.gamma(),
        mu: pp.mu(),
        delta: pp.delta(),
        overall: a1_holds && a2_holds && a3_holds,
        cardinalities,
    }
}

/// Evaluates (A1)–(A3) for `net` and `part`.
pub fn check_conditions(
    net: &OscillatorNetwork,
    part: &ClusterPartition,
    pp: &PlasticityParams,
) -> Result<ConditionReport> {
    check_conditions_with_tolerance(net, part, pp, 0.0)
}

/// As [`check_conditions`], with a tolerance for the (A1) frequency test.
pub fn check_conditions_with_tolerance(
    net: &OscillatorNetwork,
    part: &ClusterPartition,
    pp: &PlasticityParams,
    a1_tolerance: f64,
) -> Result<ConditionReport> {
    let a1 = check_a1(net, part, a1_tolerance)?;
    let card = compute_cardinalities(net, part)?;
    let c_out = card.c_out as f64;
    Ok(assemble(a1.holds, card, c_out, net, pp))
}

/// Signed sum of the perturbation entries sitting on inter-cluster positions.
pub fn c_tilde_out(part: &ClusterPartition, tilde_a: &PerturbationMatrix) -> i64 {
    tilde_a
        .to_sparse()
        .into_iter()
        .filter(|&(i, j, _)| !part.same_cluster(i, j))
        .map(|(_, _, v)| v as i64)
        .sum()
}

/// Evaluates (A1), (A2′), (A3′) for `A + Ã` without materialising the
/// perturbed network: counts read `a_ij + ã_ij` entrywise and the square-root
/// term uses `c_out + c̃_out`.
pub fn check_corollary(
    net: &OscillatorNetwork,
    tilde_a: &PerturbationMatrix,
    part: &ClusterPartition,
    pp: &PlasticityParams,
) -> Result<ConditionReport> {
    tilde_a.validate_for(net)?;
    part.check_fits(net.n_nodes())?;
    let a1 = check_a1(net, part, 0.0)?;
    let card = cardinalities_with(net.n_nodes(), part, |i, j| {
        net.adjacency()[[i, j]] as i8 + tilde_a.get(i, j) == 1
    });
    let base_c_out = compute_cardinalities(net, part)?.c_out as i64;
    let c_out = base_c_out + c_tilde_out(part, tilde_a);
    debug_assert_eq!(c_out, card.c_out as i64);
    Ok(assemble(a1.holds, card, c_out as f64, net, pp))
}

/// Geometric contraction factor of the torus iteration.
///
/// Requires (A2) and a vector field on the torus bounded away from zero.
pub fn contraction_ratio(
    net: &OscillatorNetwork,
    part: &ClusterPartition,
    pp: &PlasticityParams,
) -> Result<f64> {
    let card = compute_cardinalities(net, part)?;
    if !card.a2_holds {
        return Err(Error::A2Violated);
    }
    let (w_min, w_max) = frequency_extremes(net);
    let (lhs, ratio) = a3_terms(
        w_min,
        w_max,
        pp,
        card.c_max,
        card.c_out as f64,
        card.sum_c_sr(),
    );
    if pp.mu() > 0.0 && lhs <= 0.0 {
        return Err(Error::NotSeparated(lhs));
    }
    Ok(ratio)
}
