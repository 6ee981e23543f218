//! Scenario files: one JSON document describing a network, its plasticity
//! and a task, plus optional expectations used by `reproduce-all`.

use std::fmt;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::conditions::check_conditions;
use crate::design::design_topology;
use crate::dynamics::{
    error_metrics, random_couplings, simulate, simulate_static_pair, switch_topology_scenario,
    two_oscillator_static_analysis, NetworkState, SimConfig, Trajectory,
};
use crate::error::{Error, Result};
use crate::network::{ClusterPartition, NetworkConfig, OscillatorNetwork};
use crate::plasticity::{PlasticityConfig, PlasticityParams};
use crate::torus::{
    export_surface, invariance_residual, solve_torus, write_surface_csv, TorusConfig, DEFAULT_STEP,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Check,
    Simulate,
    Torus,
    Design,
    TwoOsc,
    Switch,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Task::Check => "check",
            Task::Simulate => "simulate",
            Task::Torus => "torus",
            Task::Design => "design",
            Task::TwoOsc => "two-osc",
            Task::Switch => "switch",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub task: Task,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub network: Option<NetworkConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plasticity: Option<PlasticityConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub switch: Option<SwitchParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torus: Option<TorusParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub design: Option<DesignParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_osc: Option<TwoOscParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expectations>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationParams {
    pub t_end: f64,
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default = "default_stride")]
    pub record_stride: usize,
    #[serde(default)]
    pub seed: u64,
    pub initial: InitialConfig,
    /// Tolerance for `time_to_tolerance` in the metrics.
    #[serde(default = "default_error_tolerance")]
    pub error_tolerance: f64,
}

fn default_step() -> f64 {
    0.01
}

fn default_stride() -> usize {
    10
}

fn default_error_tolerance() -> f64 {
    1e-3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    pub phases: Vec<f64>,
    pub couplings: CouplingInit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CouplingInit {
    /// Uniform in `[low, high]` on every edge, drawn from the scenario seed.
    Random { low: f64, high: f64 },
    /// One value for intra-cluster edges and one for inter-cluster edges.
    ByKind { intra: f64, inter: f64 },
    /// Full `N × N` matrix; entries off the edge set are ignored.
    Explicit { matrix: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwitchParams {
    pub t_switch: f64,
    /// Adjacency used from `t_switch` on (same nodes, frequencies and
    /// partition).
    pub adjacency_after: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusParams {
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(default = "default_torus_step")]
    pub step: f64,
    #[serde(default)]
    pub force: bool,
    /// 1-based `(receiver, source)` edge for the surface export; defaults to
    /// the first inter-cluster edge.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface_edge: Option<[usize; 2]>,
}

fn default_resolution() -> usize {
    64
}

fn default_tol() -> f64 {
    1e-10
}

fn default_max_iter() -> usize {
    60
}

fn default_torus_step() -> f64 {
    DEFAULT_STEP
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignParams {
    pub max_edits: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoOscParams {
    pub w1: f64,
    pub w2: f64,
    pub k: f64,
    #[serde(default = "default_pair_initial")]
    pub initial: [f64; 2],
    #[serde(default = "default_pair_t_end")]
    pub t_end: f64,
    #[serde(default = "default_step")]
    pub step: f64,
}

fn default_pair_initial() -> [f64; 2] {
    [0.0, 1.0]
}

fn default_pair_t_end() -> f64 {
    200.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Target {
    pub value: f64,
    pub tol: f64,
}

impl Target {
    fn holds(&self, x: f64) -> bool {
        (x - self.value).abs() <= self.tol
    }
}

/// Pass criteria checked after a run; every present field must hold.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overall: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<Target>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<Target>,
    /// `sup_final_error` strictly below this value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_error_below: Option<f64>,
    /// Peak error strictly above this value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peak_error_above: Option<f64>,
    /// Every intra-cluster coupling limit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intra_coupling: Option<Target>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_below: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feasible: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edits: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_difference: Option<Target>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_frequency: Option<Target>,
}

/// Command-line overrides applied on top of a scenario file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub task: Option<Task>,
    pub seed: Option<u64>,
    pub force: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub scenario: String,
    pub task: Task,
    /// 0 on success, 2 when a `check` task finds the conditions violated.
    pub exit_code: i32,
    pub checks: Vec<Check>,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    pub fn expectations_met(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl Scenario {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Scenario(format!("{}: {e}", path.display())))
    }

    fn parts(&self) -> Result<(OscillatorNetwork, ClusterPartition, PlasticityParams)> {
        let net = self
            .network
            .as_ref()
            .ok_or_else(|| self.missing("network"))?;
        let pp = self
            .plasticity
            .as_ref()
            .ok_or_else(|| self.missing("plasticity"))?
            .params()?;
        let (net, part) = net.parts()?;
        Ok((net, part, pp))
    }

    fn missing(&self, block: &str) -> Error {
        Error::Scenario(format!("scenario '{}' has no '{block}' block", self.name))
    }

    /// Checks that the blocks needed by `task` are present.
    pub fn validate_for(&self, task: Task) -> Result<()> {
        let need = |present: bool, block: &str| {
            if present {
                Ok(())
            } else {
                Err(self.missing(block))
            }
        };
        if task != Task::TwoOsc {
            need(self.network.is_some(), "network")?;
            need(self.plasticity.is_some(), "plasticity")?;
        }
        match task {
            Task::Check => Ok(()),
            Task::Simulate => need(self.simulation.is_some(), "simulation"),
            Task::Switch => {
                need(self.simulation.is_some(), "simulation")?;
                need(self.switch.is_some(), "switch")
            }
            Task::Torus => need(self.torus.is_some(), "torus"),
            Task::Design => need(self.design.is_some(), "design"),
            Task::TwoOsc => need(self.two_osc.is_some(), "two_osc"),
        }
    }
}

fn initial_state(
    net: &OscillatorNetwork,
    part: &ClusterPartition,
    sim: &SimulationParams,
) -> Result<NetworkState> {
    let phases = sim.initial.phases.clone();
    match &sim.initial.couplings {
        CouplingInit::Random { low, high } => {
            if !(low <= high) {
                return Err(Error::Parameter(format!(
                    "empty coupling range [{low}, {high}]"
                )));
            }
            NetworkState::new(net, phases, random_couplings(net, *low, *high, sim.seed))
        }
        CouplingInit::ByKind { intra, inter } => NetworkState::from_edges(net, phases, |i, j| {
            if part.same_cluster(i, j) {
                *intra
            } else {
                *inter
            }
        }),
        CouplingInit::Explicit { matrix } => {
            let n = net.n_nodes();
            if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
                return Err(Error::Dimension(format!("coupling matrix must be {n}×{n}")));
            }
            let k = Array2::from_shape_fn((n, n), |(i, j)| matrix[i][j]);
            NetworkState::new(net, phases, k)
        }
    }
}

fn write_json(
    dir: &Path,
    file: &str,
    value: &impl Serialize,
    files: &mut Vec<PathBuf>,
) -> Result<()> {
    let path = dir.join(file);
    fs::write(&path, serde_json::to_string_pretty(value)? + "\n")?;
    files.push(path);
    Ok(())
}

fn write_trajectory(dir: &Path, traj: &Trajectory, files: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join("trajectory.csv");
    traj.write_csv(BufWriter::new(File::create(&path)?))?;
    files.push(path);
    Ok(())
}

struct Checker<'a> {
    expect: &'a Expectations,
    checks: Vec<Check>,
}

impl Checker<'_> {
    fn push(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail,
        });
    }

    fn target(&mut self, name: &str, t: Option<Target>, x: f64) {
        if let Some(t) = t {
            self.push(name, t.holds(x), format!("{x} vs {} ± {}", t.value, t.tol));
        }
    }

    fn below(&mut self, name: &str, limit: Option<f64>, x: f64) {
        if let Some(l) = limit {
            self.push(name, x < l, format!("{x} < {l}"));
        }
    }

    fn above(&mut self, name: &str, limit: Option<f64>, x: f64) {
        if let Some(l) = limit {
            self.push(name, x > l, format!("{x} > {l}"));
        }
    }

    fn equals<T: PartialEq + fmt::Debug>(&mut self, name: &str, want: Option<T>, got: T) {
        if let Some(w) = want {
            self.push(name, w == got, format!("{got:?}, expected {w:?}"));
        }
    }
}

/// Runs one scenario, writing its artifacts into `out` when given.
pub fn run_scenario(
    scenario: &Scenario,
    out: Option<&Path>,
    overrides: &Overrides,
) -> Result<Outcome> {
    let task = overrides.task.unwrap_or(scenario.task);
    scenario.validate_for(task)?;
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
    }
    let default_expect = Expectations::default();
    let mut ck = Checker {
        expect: scenario.expect.as_ref().unwrap_or(&default_expect),
        checks: Vec::new(),
    };
    let mut files = Vec::new();
    let mut exit_code = 0;

    match task {
        Task::Check => {
            let (net, part, pp) = scenario.parts()?;
            let report = check_conditions(&net, &part, &pp)?;
            if !report.overall {
                exit_code = 2;
            }
            ck.equals("overall", ck.expect.overall, report.overall);
            ck.target("ratio", ck.expect.ratio, report.ratio_a3);
            ck.target("lhs", ck.expect.lhs, report.lhs_a3);
            if let Some(dir) = out {
                let doc = json!({
                    "scenario": scenario.name,
                    "report": report,
                    "notes": scenario.notes,
                });
                write_json(dir, "report.json", &doc, &mut files)?;
            }
        }
        Task::Simulate | Task::Switch => {
            let (net, part, pp) = scenario.parts()?;
            let mut sim = scenario.simulation.clone().expect("validated");
            if let Some(seed) = overrides.seed {
                sim.seed = seed;
            }
            let initial = initial_state(&net, &part, &sim)?;
            let config = SimConfig::new(sim.t_end, sim.step, sim.record_stride);
            let traj = if task == Task::Switch {
                let sw = scenario.switch.as_ref().expect("validated");
                let after =
                    OscillatorNetwork::from_rows(&sw.adjacency_after, net.frequencies().to_vec())?;
                switch_topology_scenario(
                    &net,
                    &after,
                    &pp,
                    &initial,
                    sw.t_switch,
                    config,
                    Some(&part),
                )?
            } else {
                simulate(&net, &pp, &initial, config, Some(&part))?
            };
            let metrics = error_metrics(&traj, sim.error_tolerance)?;
            ck.below(
                "final error",
                ck.expect.final_error_below,
                metrics.sup_final_error,
            );
            ck.above("peak error", ck.expect.peak_error_above, metrics.peak_error);
            if let Some(t) = ck.expect.intra_coupling {
                let worst = metrics
                    .intra_coupling_limits
                    .iter()
                    .map(|c| (c.mean - t.value).abs())
                    .fold(0.0, f64::max);
                ck.push(
                    "intra coupling",
                    worst <= t.tol,
                    format!("max deviation {worst} from {} (tol {})", t.value, t.tol),
                );
            }
            if let Some(dir) = out {
                write_trajectory(dir, &traj, &mut files)?;
                let doc =
                    json!({ "scenario": scenario.name, "seed": sim.seed, "metrics": metrics });
                write_json(dir, "metrics.json", &doc, &mut files)?;
            }
        }
        Task::Torus => {
            let (net, part, pp) = scenario.parts()?;
            let tp = scenario.torus.as_ref().expect("validated");
            let config = TorusConfig {
                resolution: tp.resolution,
                horizon: tp.horizon,
                step: tp.step,
                tol: tp.tol,
                max_iter: tp.max_iter,
                force: tp.force || overrides.force,
            };
            let (u, log) = solve_torus(&net, &part, &pp, config)?;
            let residual = invariance_residual(&net, &part, &pp, &u)?;
            ck.equals("converged", ck.expect.converged, log.converged);
            ck.below("residual", ck.expect.residual_below, residual);
            if let Some(dir) = out {
                let path = dir.join("torus.json");
                u.save(&pp, &path)?;
                files.push(path);
                let doc = json!({
                    "scenario": scenario.name,
                    "log": log,
                    "empirical_ratios": log.empirical_ratios(),
                    "residual": residual,
                    "intra_value": pp.intra_equilibrium(),
                });
                write_json(dir, "iterations.json", &doc, &mut files)?;
                if u.m() == 2 && u.c_out() > 0 {
                    let edge = match tp.surface_edge {
                        Some([i, j]) if i > 0 && j > 0 => (i - 1, j - 1),
                        Some(_) => return Err(Error::Parameter("surface_edge is 1-based".into())),
                        None => u.edge_order()[0],
                    };
                    let rows = export_surface(&u, edge)?;
                    let path = dir.join(format!("surface_{}_{}.csv", edge.0 + 1, edge.1 + 1));
                    write_surface_csv(&rows, BufWriter::new(File::create(&path)?))?;
                    files.push(path);
                }
            }
        }
        Task::Design => {
            let (net, part, pp) = scenario.parts()?;
            let dp = scenario.design.as_ref().expect("validated");
            let result = design_topology(&net, &part, &pp, dp.max_edits)?;
            ck.equals("feasible", ck.expect.feasible, result.feasible);
            ck.equals("edits", ck.expect.edits, result.edits);
            ck.target("ratio", ck.expect.ratio, result.report.ratio_a3);
            if let Some(dir) = out {
                write_json(dir, "design.json", &result, &mut files)?;
            }
        }
        Task::TwoOsc => {
            let p = scenario.two_osc.as_ref().expect("validated");
            let analysis = two_oscillator_static_analysis(p.w1, p.w2, p.k)?;
            let run = simulate_static_pair(p.w1, p.w2, p.k, p.initial, p.t_end, p.step)?;
            ck.target(
                "phase difference",
                ck.expect.phase_difference,
                run.phase_difference,
            );
            ck.target(
                "mean frequency",
                ck.expect.mean_frequency,
                run.mean_frequency,
            );
            if let Some(dir) = out {
                let doc =
                    json!({ "scenario": scenario.name, "analysis": analysis, "simulation": run });
                write_json(dir, "two_osc.json", &doc, &mut files)?;
            }
        }
    }

    Ok(Outcome {
        scenario: scenario.name.clone(),
        task,
        exit_code,
        checks: ck.checks,
        files,
    })
}

/// Loads and runs a scenario file; returns the process exit code and prints
/// a short summary.
pub fn run(path: &Path, out: Option<&Path>, overrides: &Overrides) -> i32 {
    let outcome = Scenario::load(path).and_then(|s| run_scenario(&s, out, overrides));
    match outcome {
        Ok(o) => {
            println!("{} [{}]", o.scenario, o.task);
            for c in &o.checks {
                println!(
                    "  {} {}: {}",
                    if c.passed { "ok  " } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            for f in &o.files {
                println!("  wrote {}", f.display());
            }
            if o.exit_code == 2 {
                println!("  conditions not satisfied");
            }
            o.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[derive(Debug)]
pub struct Reproduction {
    pub name: String,
    pub result: Result<Outcome>,
}

impl Reproduction {
    /// Ran without error and met every expectation.
    pub fn passed(&self) -> bool {
        self.result.as_ref().is_ok_and(Outcome::expectations_met)
    }
}

/// Runs every `*.json` scenario in `dir` (optionally only those named in
/// `only`), each writing into its own subdirectory of `out`.
pub fn reproduce_all(dir: &Path, only: &[String], out: Option<&Path>) -> Result<Vec<Reproduction>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let scenarios = paths
        .iter()
        .map(Scenario::load)
        .collect::<Result<Vec<_>>>()?;
    let selected: Vec<&Scenario> = scenarios
        .iter()
        .filter(|s| only.is_empty() || only.contains(&s.name))
        .collect();
    if selected.is_empty() {
        return Err(Error::Scenario(format!(
            "no scenarios selected in {}",
            dir.display()
        )));
    }
    Ok(selected
        .par_iter()
        .map(|s| Reproduction {
            name: s.name.clone(),
            result: run_scenario(
                s,
                out.map(|o| o.join(&s.name)).as_deref(),
                &Overrides::default(),
            ),
        })
        .collect())
}

/// Fixed-width pass/fail table.
pub fn summary_table(runs: &[Reproduction]) -> String {
    let width = runs.iter().map(|r| r.name.len()).max().unwrap_or(8).max(8);
    let mut s = format!(
        "{:<width$}  {:<8}  {:<6}  detail\n",
        "scenario", "task", "result"
    );
    for r in runs {
        let (task, detail) = match &r.result {
            Ok(o) => (
                o.task.to_string(),
                o.checks
                    .iter()
                    .map(|c| format!("{}: {}", c.name, c.detail))
                    .collect::<Vec<_>>()
                    .join("; "),
            ),
            Err(e) => ("-".into(), e.to_string()),
        };
        let verdict = if r.passed() { "PASS" } else { "FAIL" };
        s += &format!(
            "{:<width$}  {:<8}  {:<6}  {detail}\n",
            r.name, task, verdict
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const CHECK: &str = r#"{
        "name": "pair",
        "task": "check",
        "network": {
            "adjacency": [[0, 1], [1, 0]],
            "frequencies": [1.0, 1.0],
            "partition": [[1], [2]]
        },
        "plasticity": { "gamma": 1.0, "mu": 0.01 },
        "expect": { "overall": true }
    }"#;

    #[test]
    fn parses_and_runs_a_check() {
        let s: Scenario = serde_json::from_str(CHECK).unwrap();
        let o = run_scenario(&s, None, &Overrides::default()).unwrap();
        assert_eq!(o.exit_code, 0);
        assert!(o.expectations_met());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let bad = CHECK.replace("\"task\"", "\"colour\": 1, \"task\"");
        assert!(serde_json::from_str::<Scenario>(&bad).is_err());
    }

    #[test]
    fn task_blocks_are_required() {
        let s: Scenario = serde_json::from_str(CHECK).unwrap();
        let o = Overrides {
            task: Some(Task::Simulate),
            ..Default::default()
        };
        assert!(matches!(
            run_scenario(&s, None, &o),
            Err(Error::Scenario(_))
        ));
    }

    #[test]
    fn coupling_init_kinds() {
        let k: CouplingInit =
            serde_json::from_str(r#"{"kind": "by-kind", "intra": 1, "inter": 0}"#).unwrap();
        assert_eq!(
            k,
            CouplingInit::ByKind {
                intra: 1.0,
                inter: 0.0
            }
        );
        let k: CouplingInit =
            serde_json::from_str(r#"{"kind": "random", "low": -0.015, "high": 0.015}"#).unwrap();
        assert!(matches!(k, CouplingInit::Random { .. }));
    }
}
