//! Two oscillators with fixed coupling: the locked phase difference and
//! common frequency against a direct simulation.

use adaptive_kuramoto::dynamics::simulate_static_pair;
use adaptive_kuramoto::two_oscillator_static_analysis;

fn main() -> adaptive_kuramoto::Result<()> {
    for (w1, w2, k) in [(0.9, 1.1, 1.0), (0.8, 0.8, 0.3), (0.0, 3.0, 1.0)] {
        let a = two_oscillator_static_analysis(w1, w2, k)?;
        let run = simulate_static_pair(w1, w2, k, [0.0, 1.0], 200.0, 0.01)?;
        println!(
            "w = ({w1}, {w2}), k = {k}: locked {:?}, predicted {:?} / {}; simulated {:.6} / {:.6}",
            a.synchronizable, a.d, a.mean_freq, run.phase_difference, run.mean_frequency
        );
    }
    Ok(())
}
