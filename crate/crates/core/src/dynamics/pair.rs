//! Two oscillators with static coupling `k`:
//! `θ̇_1 = w_1 + k sin(θ_2 − θ_1)`, `θ̇_2 = w_2 + k sin(θ_1 − θ_2)`.
//!
//! In the error coordinate `e = θ_2 − θ_1` a constant `e ≡ d` is an invariant
//! circle iff `sin d = (w_2 − w_1) / 2k`; on it both phases rotate at the mean
//! natural frequency.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrate::Rk4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoOscillatorAnalysis {
    /// Locked phase difference `arcsin((w_2 − w_1)/2k)`; `None` when the
    /// detuning exceeds `2k`.
    pub d: Option<f64>,
    pub mean_freq: f64,
    pub synchronizable: bool,
}

pub fn two_oscillator_static_analysis(w1: f64, w2: f64, k: f64) -> Result<TwoOscillatorAnalysis> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::Parameter(format!(
            "coupling must be positive, got {k}"
        )));
    }
    let synchronizable = (w2 - w1).abs() <= 2.0 * k;
    Ok(TwoOscillatorAnalysis {
        d: synchronizable.then(|| ((w2 - w1) / (2.0 * k)).asin()),
        mean_freq: 0.5 * (w1 + w2),
        synchronizable,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StaticPairRun {
    /// `θ_2 − θ_1` at the end of the run, wrapped to `(−π, π]`.
    pub phase_difference: f64,
    /// Average of `θ̇_1` over the second half of the run.
    pub mean_frequency: f64,
}

/// Integrates the static pair with RK4 on unwrapped phases.
pub fn simulate_static_pair(
    w1: f64,
    w2: f64,
    k: f64,
    initial: [f64; 2],
    t_end: f64,
    step: f64,
) -> Result<StaticPairRun> {
    if !(step > 0.0 && t_end > 0.0) {
        return Err(Error::Parameter("step and t_end must be positive".into()));
    }
    let steps = (t_end / step).round() as usize;
    let half = steps / 2;
    let mut rk = Rk4::new(2);
    let mut y = initial;
    let mut theta_half = y[0];
    let f = |_: f64, y: &[f64], dy: &mut [f64]| {
        dy[0] = w1 + k * (y[1] - y[0]).sin();
        dy[1] = w2 + k * (y[0] - y[1]).sin();
    };
    for n in 0..steps {
        if n == half {
            theta_half = y[0];
        }
        rk.step(f, n as f64 * step, &mut y, step);
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            last_valid_time: 0.0,
        });
    }
    Ok(StaticPairRun {
        phase_difference: super::wrap_error(y[1] - y[0]),
        mean_frequency: (y[0] - theta_half) / ((steps - half) as f64 * step),
    })
}
