//! Time integration of the adaptive network and of its reduced form on the
//! cluster torus.

mod full;
mod pair;
mod reduced;
mod trajectory;

use std::f64::consts::{PI, TAU};

pub use full::{
    random_couplings, rhs_full, simulate, switch_topology_scenario, NetworkState, SimConfig,
    StateDerivative,
};
pub use pair::{
    simulate_static_pair, two_oscillator_static_analysis, StaticPairRun, TwoOscillatorAnalysis,
};
pub use reduced::{rhs_reduced, ReducedState, ReducedSystem};
pub use trajectory::{error_metrics, CouplingLimit, ErrorMetrics, Trajectory};

/// Maps a phase onto `[0, 2π)`.
#[inline]
pub fn wrap_phase(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Maps a phase difference onto `(−π, π]`.
#[inline]
pub fn wrap_error(x: f64) -> f64 {
    let y = x - TAU * (x / TAU).round();
    if y <= -PI {
        y + TAU
    } else if y > PI {
        y - TAU
    } else {
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrapping_conventions() {
        assert_eq!(wrap_error(PI), PI);
        assert_eq!(wrap_error(-PI), PI);
        assert!((wrap_error(3.0 * PI) - PI).abs() < 1e-15);
        assert!((wrap_error(0.1 - TAU) - 0.1).abs() < 1e-15);
        assert_eq!(wrap_phase(-1e-18), 0.0);
        assert!((wrap_phase(-0.5) - (TAU - 0.5)).abs() < 1e-15);
        for k in -50..50 {
            let x = 0.37 * k as f64;
            let e = wrap_error(x);
            assert!(e > -PI && e <= PI);
            let p = wrap_phase(x);
            assert!((0.0..TAU).contains(&p));
        }
    }
}
