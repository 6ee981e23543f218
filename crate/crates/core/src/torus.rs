//! Construction of the invariant torus `k_inter = u(φ)` of the reduced system
//! by successive approximations.
//!
//! Starting from `u⁽⁰⁾ ≡ 0`, each step freezes the previous approximation in
//! the torus flow and solves the resulting linear problem in closed form:
//!
//! ```text
//! φ̇ = w̄ + B(φ) u⁽ˡ⁾(φ)
//! u⁽ˡ⁺¹⁾(φ) = ∫_{−∞}^0 e^{γτ} μ G(φ_τ(φ)) dτ
//! ```
//!
//! where `φ_τ(φ)` is the flow started at `φ`. The improper integral is cut at
//! `−horizon` and evaluated by integrating `(φ, q)` backwards with RK4, `q`
//! being the running quadrature, so the quadrature reuses the RK4 stage
//! values. Differences `z_l = |u⁽ˡ⁺¹⁾ − u⁽ˡ⁾|_0` shrink geometrically at a rate
//! bounded by [`contraction_ratio`](crate::conditions::contraction_ratio).
//!
//! `u` is stored on a uniform periodic grid of `R^m` points and evaluated off
//! the grid by periodic multilinear interpolation.

use std::f64::consts::TAU;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conditions::{check_conditions, contraction_ratio};
use crate::dynamics::{NetworkState, ReducedSystem};
use crate::error::{Error, Result};
use crate::integrate::Rk4;
use crate::network::{ClusterPartition, OscillatorNetwork};
use crate::plasticity::{LearningRule, PlasticityParams};

/// Grid samples of `u : T_m → R^{c_out}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusFunction {
    m: usize,
    resolution: usize,
    edge_order: Vec<(usize, usize)>,
    /// Grid-major: point `p` owns `values[p * c_out .. (p + 1) * c_out]`.
    /// Points are numbered with axis 0 varying slowest.
    values: Vec<f64>,
}

/// Corner indices and weights of one multilinear interpolation.
#[derive(Debug, Clone, Default)]
pub struct InterpStencil {
    points: Vec<usize>,
    weights: Vec<f64>,
}

impl TorusFunction {
    pub fn zeros(m: usize, resolution: usize, edge_order: Vec<(usize, usize)>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Parameter("torus dimension must be positive".into()));
        }
        if resolution < 2 {
            return Err(Error::Parameter(format!(
                "grid resolution must be at least 2, got {resolution}"
            )));
        }
        let points = resolution
            .checked_pow(m as u32)
            .filter(|p| p.checked_mul(edge_order.len().max(1)).is_some())
            .ok_or_else(|| Error::Parameter("torus grid is too large".into()))?;
        Ok(Self {
            m,
            resolution,
            values: vec![0.0; points * edge_order.len()],
            edge_order,
        })
    }

    /// Samples `f(φ)` at every grid point.
    pub fn from_fn(
        m: usize,
        resolution: usize,
        edge_order: Vec<(usize, usize)>,
        f: impl Fn(&[f64]) -> Vec<f64>,
    ) -> Result<Self> {
        let mut u = Self::zeros(m, resolution, edge_order)?;
        let c = u.c_out();
        for p in 0..u.grid_len() {
            let v = f(&u.grid_point(p));
            if v.len() != c {
                return Err(Error::Dimension(format!(
                    "{} components, expected {c}",
                    v.len()
                )));
            }
            u.values[p * c..(p + 1) * c].copy_from_slice(&v);
        }
        Ok(u)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn c_out(&self) -> usize {
        self.edge_order.len()
    }

    pub fn edge_order(&self) -> &[(usize, usize)] {
        &self.edge_order
    }

    pub fn grid_len(&self) -> usize {
        self.resolution.pow(self.m as u32)
    }

    pub fn spacing(&self) -> f64 {
        TAU / self.resolution as f64
    }

    /// Per-axis grid indices of point `p`.
    pub fn grid_index(&self, mut p: usize) -> Vec<usize> {
        let mut idx = vec![0; self.m];
        for a in (0..self.m).rev() {
            idx[a] = p % self.resolution;
            p /= self.resolution;
        }
        idx
    }

    fn flat_index(&self, idx: impl Iterator<Item = usize>) -> usize {
        idx.fold(0, |acc, i| acc * self.resolution + i)
    }

    pub fn grid_point(&self, p: usize) -> Vec<f64> {
        let h = self.spacing();
        self.grid_index(p)
            .into_iter()
            .map(|i| i as f64 * h)
            .collect()
    }

    /// Values of all components at grid point `p`.
    pub fn at(&self, p: usize) -> &[f64] {
        let c = self.c_out();
        &self.values[p * c..(p + 1) * c]
    }

    /// Grid point `p` shifted by `offset` cells along `axis`, wrapping around.
    pub fn neighbor(&self, p: usize, axis: usize, offset: isize) -> usize {
        let mut idx = self.grid_index(p);
        idx[axis] = (idx[axis] as isize + offset).rem_euclid(self.resolution as isize) as usize;
        self.flat_index(idx.into_iter())
    }

    /// Fills `stencil` for evaluation at `phi`.
    pub fn stencil(&self, phi: &[f64], stencil: &mut InterpStencil) {
        debug_assert_eq!(phi.len(), self.m);
        let r = self.resolution;
        let corners = 1usize << self.m;
        stencil.points.clear();
        stencil.weights.clear();
        let mut base = [0usize; 8];
        let mut frac = [0f64; 8];
        let mut base_v = Vec::new();
        let mut frac_v = Vec::new();
        let (base, frac): (&mut [usize], &mut [f64]) = if self.m <= 8 {
            (&mut base[..self.m], &mut frac[..self.m])
        } else {
            base_v.resize(self.m, 0);
            frac_v.resize(self.m, 0.0);
            (&mut base_v[..], &mut frac_v[..])
        };
        for a in 0..self.m {
            let x = phi[a].rem_euclid(TAU) / TAU * r as f64;
            let k = x.floor();
            let mut i = k as usize;
            let mut t = x - k;
            if i >= r {
                i = 0;
                t = 0.0;
            }
            base[a] = i;
            frac[a] = t;
        }
        for corner in 0..corners {
            let mut w = 1.0;
            let mut flat = 0usize;
            for a in 0..self.m {
                let upper = (corner >> (self.m - 1 - a)) & 1 == 1;
                let i = if upper { (base[a] + 1) % r } else { base[a] };
                w *= if upper { frac[a] } else { 1.0 - frac[a] };
                flat = flat * r + i;
            }
            stencil.points.push(flat);
            stencil.weights.push(w);
        }
    }

    #[inline]
    pub fn eval_component_with(&self, stencil: &InterpStencil, e: usize) -> f64 {
        let c = self.c_out();
        stencil
            .points
            .iter()
            .zip(&stencil.weights)
            .map(|(&p, &w)| w * self.values[p * c + e])
            .sum()
    }

    /// Interpolated value of every component at `phi`.
    pub fn eval(&self, phi: &[f64]) -> Vec<f64> {
        let mut st = InterpStencil::default();
        self.stencil(phi, &mut st);
        (0..self.c_out())
            .map(|e| self.eval_component_with(&st, e))
            .collect()
    }

    /// Tensor-product cubic (four-point Lagrange) interpolation, periodic in
    /// every axis. Fourth-order accurate where multilinear interpolation is
    /// second-order; used when a point on the torus itself is needed rather
    /// than a velocity field.
    pub fn eval_cubic(&self, phi: &[f64]) -> Vec<f64> {
        assert_eq!(phi.len(), self.m);
        let r = self.resolution as isize;
        let c = self.c_out();
        let mut base = Vec::with_capacity(self.m);
        let mut weights = Vec::with_capacity(self.m);
        for &x in phi {
            let x = x.rem_euclid(TAU) / TAU * self.resolution as f64;
            let k = x.floor();
            let t = x - k;
            base.push(k as isize);
            weights.push([
                -t * (t - 1.0) * (t - 2.0) / 6.0,
                (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
                -(t + 1.0) * t * (t - 2.0) / 2.0,
                (t + 1.0) * t * (t - 1.0) / 6.0,
            ]);
        }
        let mut out = vec![0.0; c];
        for corner in 0..4usize.pow(self.m as u32) {
            let mut w = 1.0;
            let mut flat = 0usize;
            let mut code = corner;
            let mut offsets = vec![0usize; self.m];
            for a in (0..self.m).rev() {
                offsets[a] = code % 4;
                code /= 4;
            }
            for a in 0..self.m {
                let i = (base[a] + offsets[a] as isize - 1).rem_euclid(r) as usize;
                w *= weights[a][offsets[a]];
                flat = flat * self.resolution + i;
            }
            for (o, v) in out.iter_mut().zip(self.at(flat)) {
                *o += w * v;
            }
        }
        out
    }

    /// `|u|_0 = max_φ ‖u(φ)‖` over grid points (Euclidean norm).
    pub fn sup_norm(&self) -> f64 {
        (0..self.grid_len())
            .map(|p| norm(self.at(p)))
            .fold(0.0, f64::max)
    }

    pub fn sup_distance(&self, other: &Self) -> f64 {
        assert_eq!(self.values.len(), other.values.len());
        (0..self.grid_len())
            .map(|p| {
                self.at(p)
                    .iter()
                    .zip(other.at(p))
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// Component index of the inter-cluster edge `(receiver, source)`.
    pub fn edge_index(&self, edge: (usize, usize)) -> Option<usize> {
        self.edge_order.iter().position(|&e| e == edge)
    }

    pub fn to_file(&self, pp: &PlasticityParams) -> TorusFile {
        TorusFile {
            m: self.m,
            resolution: self.resolution,
            edge_order: self
                .edge_order
                .iter()
                .map(|&(i, j)| [i + 1, j + 1])
                .collect(),
            gamma: pp.gamma(),
            mu: pp.mu(),
            delta: pp.delta(),
            rows: self
                .values
                .chunks(self.c_out().max(1))
                .map(<[f64]>::to_vec)
                .collect(),
        }
    }

    pub fn save(&self, pp: &PlasticityParams, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(&self.to_file(pp))?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let file: TorusFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        file.into_function()
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// On-disk torus: metadata plus one row of component values per grid point.
/// Edge labels are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusFile {
    pub m: usize,
    pub resolution: usize,
    pub edge_order: Vec<[usize; 2]>,
    pub gamma: f64,
    pub mu: f64,
    pub delta: f64,
    pub rows: Vec<Vec<f64>>,
}

impl TorusFile {
    pub fn into_function(self) -> Result<TorusFunction> {
        let edges = self
            .edge_order
            .iter()
            .map(|&[i, j]| match (i.checked_sub(1), j.checked_sub(1)) {
                (Some(i), Some(j)) => Ok((i, j)),
                _ => Err(Error::Parameter("edge labels are 1-based".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut u = TorusFunction::zeros(self.m, self.resolution, edges)?;
        if self.rows.len() != u.grid_len() || self.rows.iter().any(|r| r.len() != u.c_out()) {
            return Err(Error::Dimension("torus rows do not match the grid".into()));
        }
        u.values = self.rows.into_iter().flatten().collect();
        Ok(u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusConfig {
    pub resolution: usize,
    /// Truncation of the improper integral; `None` means `40 / γ`.
    pub horizon: Option<f64>,
    /// RK4 step of the backward flow.
    pub step: f64,
    pub tol: f64,
    pub max_iter: usize,
    /// Run even when (A1) or the contraction condition fails.
    pub force: bool,
}

impl Default for TorusConfig {
    fn default() -> Self {
        Self {
            resolution: 64,
            horizon: None,
            step: DEFAULT_STEP,
            tol: 1e-10,
            max_iter: 60,
            force: false,
        }
    }
}

/// Backward-flow step used when none is given.
pub const DEFAULT_STEP: f64 = 0.05;

/// Default truncation horizon `40/γ`; `e^{−40}` is below double precision.
pub fn default_horizon(pp: &PlasticityParams) -> f64 {
    40.0 / pp.gamma()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationLog {
    /// `z_l = |u⁽ˡ⁾ − u⁽ˡ⁻¹⁾|_0`, one entry per completed iteration.
    pub differences: Vec<f64>,
    /// `|u⁽ˡ⁾|_0` after each iteration.
    pub sup_norms: Vec<f64>,
    pub theoretical_ratio: f64,
    pub converged: bool,
    pub iterations_used: usize,
}

impl IterationLog {
    /// Successive ratios `z_{l+1} / z_l`.
    pub fn empirical_ratios(&self) -> Vec<f64> {
        self.differences
            .windows(2)
            .map(|w| if w[0] > 0.0 { w[1] / w[0] } else { 0.0 })
            .collect()
    }
}

struct Scratch {
    rk: Rk4,
    stencil: InterpStencil,
    y: Vec<f64>,
    sin_pair: Vec<f64>,
    gamma_pair: Vec<f64>,
}

/// Shared per-problem data of the iteration.
struct TorusProblem {
    sys: ReducedSystem,
    pairs: Vec<(usize, usize)>,
    pair_of_edge: Vec<usize>,
    /// `(edge, receiving cluster, pair)` for links received by representatives.
    rep_links: Vec<(usize, usize, usize)>,
    hebbian: bool,
    horizon: f64,
    step: f64,
}

impl TorusProblem {
    fn new(
        net: &OscillatorNetwork,
        part: &ClusterPartition,
        pp: &PlasticityParams,
        horizon: f64,
        step: f64,
    ) -> Result<Self> {
        let report = check_conditions(net, part, pp)?;
        if !report.a2_holds {
            return Err(Error::A2Violated);
        }
        if pp.mu() > 0.0 && report.lhs_a3 <= 0.0 {
            return Err(Error::NotSeparated(report.lhs_a3));
        }
        if !(horizon.is_finite() && horizon > 0.0 && step.is_finite() && step > 0.0) {
            return Err(Error::Parameter("horizon and step must be positive".into()));
        }
        let sys = ReducedSystem::new(net, part, pp)?;
        let mut pairs: Vec<(usize, usize)> = sys.edge_clusters().to_vec();
        pairs.sort_unstable();
        pairs.dedup();
        let pair_of_edge: Vec<usize> = sys
            .edge_clusters()
            .iter()
            .map(|sr| pairs.binary_search(sr).expect("pair listed"))
            .collect();
        let rep_links = sys
            .representative_edges()
            .iter()
            .map(|&e| (e, sys.edge_clusters()[e].0, pair_of_edge[e]))
            .collect();
        Ok(Self {
            hebbian: matches!(pp.rule(), LearningRule::Hebbian),
            sys,
            pairs,
            pair_of_edge,
            rep_links,
            horizon,
            step,
        })
    }

    fn check_shape(&self, u: &TorusFunction) -> Result<()> {
        if u.m() != self.sys.m() || u.edge_order() != self.sys.inter_edges() {
            return Err(Error::Dimension(
                "torus function does not match the network's inter-cluster edges".into(),
            ));
        }
        Ok(())
    }

    /// `∫_{−H}^0 e^{γτ} μ Γ(φ_r(τ) − φ_s(τ)) dτ` for every cluster pair, along
    /// the backward flow from `phi0`.
    fn pair_integrals(&self, u_prev: &TorusFunction, phi0: &[f64], scratch: &mut Scratch) {
        let m = self.sys.m();
        let pp = self.sys.params();
        let (gamma, mu) = (pp.gamma(), pp.mu());
        let w_bar = self.sys.w_bar();
        let Scratch {
            rk,
            stencil,
            y,
            sin_pair,
            gamma_pair,
        } = scratch;
        y[..m].copy_from_slice(phi0);
        y[m..].iter_mut().for_each(|q| *q = 0.0);

        let steps = (self.horizon / self.step).ceil() as usize;
        let h = self.horizon / steps as f64;
        let mut rhs = |tau: f64, y: &[f64], dy: &mut [f64]| {
            let (phi, _) = y.split_at(m);
            let (dphi, dq) = dy.split_at_mut(m);
            for (p, &(s, r)) in self.pairs.iter().enumerate() {
                let d = phi[r] - phi[s];
                if self.hebbian {
                    (sin_pair[p], gamma_pair[p]) = d.sin_cos();
                } else {
                    sin_pair[p] = d.sin();
                    gamma_pair[p] = pp.learn(d);
                }
            }
            u_prev.stencil(phi, stencil);
            dphi.copy_from_slice(w_bar);
            for &(e, s, p) in &self.rep_links {
                dphi[s] += u_prev.eval_component_with(stencil, e) * sin_pair[p];
            }
            // dq/dτ = −e^{γτ} μ Γ, so q(−H) is the integral over [−H, 0]
            let decay = mu * (gamma * tau).exp();
            for (q, g) in dq.iter_mut().zip(gamma_pair.iter()) {
                *q = -decay * g;
            }
        };
        for n in 0..steps {
            rk.step(&mut rhs, -(n as f64) * h, y, -h);
        }
    }

    fn iterate(&self, u_prev: &TorusFunction) -> Result<TorusFunction> {
        self.check_shape(u_prev)?;
        let m = self.sys.m();
        let c = u_prev.c_out();
        let n_pairs = self.pairs.len();
        let mut next = TorusFunction::zeros(m, u_prev.resolution(), u_prev.edge_order().to_vec())?;
        if c == 0 {
            return Ok(next);
        }
        next.values.par_chunks_mut(c).enumerate().for_each_init(
            || Scratch {
                rk: Rk4::new(m + n_pairs),
                stencil: InterpStencil::default(),
                y: vec![0.0; m + n_pairs],
                sin_pair: vec![0.0; n_pairs],
                gamma_pair: vec![0.0; n_pairs],
            },
            |scratch, (p, out)| {
                let phi0 = u_prev.grid_point(p);
                self.pair_integrals(u_prev, &phi0, scratch);
                for (e, v) in out.iter_mut().enumerate() {
                    *v = scratch.y[m + self.pair_of_edge[e]];
                }
            },
        );
        if next.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                last_valid_time: 0.0,
            });
        }
        Ok(next)
    }
}

/// One successive-approximation step `u⁽ˡ⁾ ↦ u⁽ˡ⁺¹⁾`.
pub fn iterate_once(
    net: &OscillatorNetwork,
    part: &ClusterPartition,
    pp: &PlasticityParams,
    u_prev: &TorusFunction,
    horizon: f64,
    step: f64,
) -> Result<TorusFunction> {
    TorusProblem::new(net, part, pp, horizon, step)?.iterate(u_prev)
}

/// Zero torus shaped for the inter-cluster edges of `net` under `part`.
pub fn zero_torus(
    net: &OscillatorNetwork,
    part: &ClusterPartition,
    resolution: usize,
) -> Result<TorusFunction> {
    let edges = net
        .edges()
        .into_iter()
        .filter(|&(i, j)| !part.same_cluster(i, j))
        .collect();
    TorusFunction::zeros(part.len(), resolution, edges)
}

/// Iterates from `u⁽⁰⁾ ≡ 0` until the sup-norm difference drops below `tol`.
pub fn solve_torus(
    net: &OscillatorNetwork,
    part: &ClusterPartition,
    pp: &PlasticityParams,
    config: TorusConfig,
) -> Result<(TorusFunction, IterationLog)> {
    let report = check_conditions(net, part, pp)?;
    if !report.overall && !config.force {
        return Err(Error::ConditionsFailed(format!(
            "A1 {}, A2 {}, A3 {} (ratio {:.6})",
            report.a1_holds, report.a2_holds, report.a3_holds, report.ratio_a3
        )));
    }
    let theoretical_ratio = contraction_ratio(net, part, pp)?;
    let horizon = config.horizon.unwrap_or_else(|| default_horizon(pp));
    let problem = TorusProblem::new(net, part, pp, horizon, config.step)?;

    let mut u = zero_torus(net, part, config.resolution)?;
    let mut log = IterationLog {
        differences: Vec::new(),
        sup_norms: Vec::new(),
        theoretical_ratio,
        converged: false,
        iterations_used: 0,
    };
    for _ in 0..config.max_iter.max(1) {
        let next = problem.iterate(&u)?;
        let z = next.sup_distance(&u);
        log.differences.push(z);
        log.sup_norms.push(next.sup_norm());
        log.iterations_used += 1;
        u = next;
        if z < config.tol {
            log.converged = true;
            return Ok((u, log));
        }
    }
    Err(Error::NoConvergence {
        iterations: log.iterations_used,
        last_difference: *log.differences.last().unwrap_or(&f64::NAN),
    })
}

/// `max_φ ‖(∂u/∂φ)(w̄ + B(φ)u(φ)) + γu(φ) − μG(φ)‖` over the grid, with
/// periodic central differences for `∂u/∂φ`.
pub fn invariance_residual(
    net: &OscillatorNetwork,
    part: &ClusterPartition,
    pp: &PlasticityParams,
    u: &TorusFunction,
) -> Result<f64> {
    if u.resolution() < 16 {
        return Err(Error::Parameter(format!(
            "residual needs resolution >= 16, got {}",
            u.resolution()
        )));
    }
    let sys = ReducedSystem::new(net, part, pp)?;
    if u.m() != sys.m() || u.edge_order() != sys.inter_edges() {
        return Err(Error::Dimension(
            "torus function does not match the network's inter-cluster edges".into(),
        ));
    }
    let (m, c) = (u.m(), u.c_out());
    let inv_2h = 1.0 / (2.0 * u.spacing());
    let (gamma, mu) = (pp.gamma(), pp.mu());
    let worst = (0..u.grid_len())
        .into_par_iter()
        .map(|p| {
            let phi = u.grid_point(p);
            let here = u.at(p);
            let mut velocity = vec![0.0; m];
            sys.torus_velocity_with(&phi, |e| here[e], &mut velocity);
            let g = sys.g_vector(&phi);
            let mut res: Vec<f64> = (0..c).map(|e| gamma * here[e] - mu * g[e]).collect();
            for (axis, &v) in velocity.iter().enumerate() {
                let fwd = u.at(u.neighbor(p, axis, 1));
                let back = u.at(u.neighbor(p, axis, -1));
                for e in 0..c {
                    res[e] += (fwd[e] - back[e]) * inv_2h * v;
                }
            }
            norm(&res)
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

/// The full invariant manifold: zero intra-cluster errors, constant
/// intra-cluster couplings and `k_inter = u(φ)`.
#[derive(Debug, Clone)]
pub struct FullManifold {
    /// `μ Γ(0) / γ`, shared by every intra-cluster link.
    pub intra: f64,
    pub inter: TorusFunction,
}

pub fn full_manifold(
    net: &OscillatorNetwork,
    part: &ClusterPartition,
    pp: &PlasticityParams,
    u: &TorusFunction,
) -> Result<FullManifold> {
    let expected = zero_torus(net, part, 2)?;
    if u.m() != part.len() || u.edge_order() != expected.edge_order() {
        return Err(Error::Dimension(
            "torus function does not match the network's inter-cluster edges".into(),
        ));
    }
    Ok(FullManifold {
        intra: pp.intra_equilibrium(),
        inter: u.clone(),
    })
}

impl FullManifold {
    /// Network state on the manifold above `phi`: every node takes its
    /// cluster phase. Inter-cluster couplings use cubic interpolation.
    pub fn state_on_manifold(
        &self,
        net: &OscillatorNetwork,
        part: &ClusterPartition,
        phi: &[f64],
    ) -> Result<NetworkState> {
        if phi.len() != part.len() {
            return Err(Error::Dimension(format!(
                "{} torus phases for {} clusters",
                phi.len(),
                part.len()
            )));
        }
        let k_inter = self.inter.eval_cubic(phi);
        let phases = (0..net.n_nodes())
            .map(|i| phi[part.cluster_of(i)])
            .collect();
        NetworkState::from_edges(net, phases, |i, j| {
            if part.same_cluster(i, j) {
                self.intra
            } else {
                self.inter
                    .edge_index((i, j))
                    .map(|e| k_inter[e])
                    .unwrap_or(0.0)
            }
        })
    }
}

/// `(φ_1, φ_2, u_edge)` over the grid of a two-cluster torus.
pub fn export_surface(u: &TorusFunction, edge: (usize, usize)) -> Result<Vec<[f64; 3]>> {
    if u.m() != 2 {
        return Err(Error::Dimension(format!(
            "surface export needs a two-cluster torus, got m = {}",
            u.m()
        )));
    }
    let e = u.edge_index(edge).ok_or_else(|| {
        Error::Parameter(format!(
            "({}, {}) is not an inter-cluster edge",
            edge.0 + 1,
            edge.1 + 1
        ))
    })?;
    Ok((0..u.grid_len())
        .map(|p| {
            let phi = u.grid_point(p);
            [phi[0], phi[1], u.at(p)[e]]
        })
        .collect())
}

pub fn write_surface_csv<W: Write>(rows: &[[f64; 3]], mut out: W) -> Result<()> {
    writeln!(out, "phi_1,phi_2,u")?;
    for [a, b, v] in rows {
        writeln!(out, "{a},{b},{v}")?;
    }
    Ok(())
}
