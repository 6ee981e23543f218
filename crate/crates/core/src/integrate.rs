//! Classical fixed-step fourth-order Runge–Kutta.
//!
//! ```text
//! k1 = f(t,       y)
//! k2 = f(t + h/2, y + h k1/2)
//! k3 = f(t + h/2, y + h k2/2)
//! k4 = f(t + h,   y + h k3)
//! y ← y + h (k1 + 2 k2 + 2 k3 + k4) / 6
//! ```
//!
//! A negative `h` integrates backwards in time.

/// Scratch buffers for repeated steps on a state of fixed dimension.
#[derive(Debug, Clone)]
pub struct Rk4 {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
}

impl Rk4 {
    pub fn new(dim: usize) -> Self {
        Self {
            k1: vec![0.0; dim],
            k2: vec![0.0; dim],
            k3: vec![0.0; dim],
            k4: vec![0.0; dim],
            tmp: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.k1.len()
    }

    /// Advances `y` from `t` to `t + h` in place.
    pub fn step<F>(&mut self, mut f: F, t: f64, y: &mut [f64], h: f64)
    where
        F: FnMut(f64, &[f64], &mut [f64]),
    {
        debug_assert_eq!(y.len(), self.dim());
        let half = 0.5 * h;

        f(t, y, &mut self.k1);
        for ((tmp, &y), &k) in self.tmp.iter_mut().zip(y.iter()).zip(&self.k1) {
            *tmp = y + half * k;
        }
        f(t + half, &self.tmp, &mut self.k2);
        for ((tmp, &y), &k) in self.tmp.iter_mut().zip(y.iter()).zip(&self.k2) {
            *tmp = y + half * k;
        }
        f(t + half, &self.tmp, &mut self.k3);
        for ((tmp, &y), &k) in self.tmp.iter_mut().zip(y.iter()).zip(&self.k3) {
            *tmp = y + h * k;
        }
        f(t + h, &self.tmp, &mut self.k4);

        let sixth = h / 6.0;
        for (i, y) in y.iter_mut().enumerate() {
            *y += sixth * (self.k1[i] + 2.0 * (self.k2[i] + self.k3[i]) + self.k4[i]);
        }
    }
}
