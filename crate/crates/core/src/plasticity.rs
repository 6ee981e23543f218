//! Learning rules and plasticity parameters of the coupling dynamics
//! `k̇_ij = −γ k_ij + μ Γ(θ_j − θ_i)`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Grid used to estimate the C¹ norm of tabulated rules.
const NORM_GRID: usize = 4096;

/// A 2π-periodic, continuously differentiable learning rule `Γ`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum LearningRule {
    /// `Γ(s) = cos s`.
    #[default]
    Hebbian,
    /// `Γ(s) = cos(s + phase_offset)`.
    ShiftedCosine { phase_offset: f64 },
    /// Samples `Γ(2πk/n)`, `k = 0..n`, joined by a periodic cubic Hermite
    /// (Catmull-Rom) interpolant so the rule stays C¹.
    Tabulated { samples: Vec<f64> },
}

impl LearningRule {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Hebbian => Ok(()),
            Self::ShiftedCosine { phase_offset } if phase_offset.is_finite() => Ok(()),
            Self::ShiftedCosine { .. } => {
                Err(Error::Parameter("phase offset must be finite".into()))
            }
            Self::Tabulated { samples } => {
                if samples.len() < 4 {
                    return Err(Error::Parameter(
                        "tabulated rule needs at least 4 samples".into(),
                    ));
                }
                if samples.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Parameter(
                        "tabulated rule has non-finite samples".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    #[inline]
    pub fn eval(&self, s: f64) -> f64 {
        match self {
            Self::Hebbian => s.cos(),
            Self::ShiftedCosine { phase_offset } => (s + phase_offset).cos(),
            Self::Tabulated { samples } => {
                let (p0, p1, p2, p3, t) = hermite_segment(samples, s);
                let t2 = t * t;
                let t3 = t2 * t;
                0.5 * (2.0 * p1
                    + (p2 - p0) * t
                    + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t2
                    + (3.0 * p1 - p0 - 3.0 * p2 + p3) * t3)
            }
        }
    }

    pub fn derivative(&self, s: f64) -> f64 {
        match self {
            Self::Hebbian => -s.sin(),
            Self::ShiftedCosine { phase_offset } => -(s + phase_offset).sin(),
            Self::Tabulated { samples } => {
                let (p0, p1, p2, p3, t) = hermite_segment(samples, s);
                let h = TAU / samples.len() as f64;
                0.5 * ((p2 - p0)
                    + 2.0 * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t
                    + 3.0 * (3.0 * p1 - p0 - 3.0 * p2 + p3) * t * t)
                    / h
            }
        }
    }

    /// `|Γ|_1 = max(|Γ|_0, |Γ'|_0)`. Exact for the cosine rules; for
    /// tabulated rules a 4096-point scan with central differences.
    pub fn c1_norm(&self) -> f64 {
        match self {
            Self::Hebbian | Self::ShiftedCosine { .. } => 1.0,
            Self::Tabulated { .. } => {
                let h = TAU / NORM_GRID as f64;
                (0..NORM_GRID)
                    .map(|k| {
                        let s = k as f64 * h;
                        let d = (self.eval(s + h) - self.eval(s - h)) / (2.0 * h);
                        self.eval(s).abs().max(d.abs())
                    })
                    .fold(0.0, f64::max)
            }
        }
    }
}

fn hermite_segment(samples: &[f64], s: f64) -> (f64, f64, f64, f64, f64) {
    let n = samples.len();
    let x = s.rem_euclid(TAU) / TAU * n as f64;
    let k = (x.floor() as usize).min(n - 1);
    let t = x - k as f64;
    let at = |offset: isize| samples[(k as isize + offset).rem_euclid(n as isize) as usize];
    (at(-1), at(0), at(1), at(2), t)
}

/// Decay rate `γ`, plasticity gain `μ`, learning rule `Γ` and `δ = |Γ|_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlasticityParams {
    gamma: f64,
    mu: f64,
    rule: LearningRule,
    delta: f64,
}

impl PlasticityParams {
    /// `μ = 0` is accepted as the degenerate static limit; `γ` must be
    /// strictly positive.
    pub fn new(gamma: f64, mu: f64, rule: LearningRule) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::Parameter(format!(
                "gamma must be positive, got {gamma}"
            )));
        }
        if !(mu.is_finite() && mu >= 0.0) {
            return Err(Error::Parameter(format!(
                "mu must be non-negative, got {mu}"
            )));
        }
        rule.validate()?;
        let delta = rule.c1_norm();
        if !(delta > 0.0) {
            return Err(Error::Parameter("learning rule has zero C1 norm".into()));
        }
        Ok(Self {
            gamma,
            mu,
            rule,
            delta,
        })
    }

    pub fn hebbian(gamma: f64, mu: f64) -> Result<Self> {
        Self::new(gamma, mu, LearningRule::Hebbian)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn rule(&self) -> &LearningRule {
        &self.rule
    }

    /// Same parameters with a different gain.
    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        Self::new(self.gamma, mu, self.rule.clone())
    }

    #[inline]
    pub fn learn(&self, phase_difference: f64) -> f64 {
        self.rule.eval(phase_difference)
    }

    /// Equilibrium of intra-cluster couplings, `μ Γ(0) / γ`.
    pub fn intra_equilibrium(&self) -> f64 {
        self.mu * self.rule.eval(0.0) / self.gamma
    }
}

/// On-disk form of [`PlasticityParams`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlasticityConfig {
    pub gamma: f64,
    pub mu: f64,
    #[serde(default)]
    pub rule: LearningRule,
}

impl PlasticityConfig {
    pub fn params(&self) -> Result<PlasticityParams> {
        PlasticityParams::new(self.gamma, self.mu, self.rule.clone())
    }
}

impl From<&PlasticityParams> for PlasticityConfig {
    fn from(p: &PlasticityParams) -> Self {
        Self {
            gamma: p.gamma,
            mu: p.mu,
            rule: p.rule.clone(),
        }
    }
}
