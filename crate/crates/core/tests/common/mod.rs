#![allow(dead_code)]

use num_complex::Complex64;

pub const EULER: f64 = 0.577_215_664_901_532_9;

/// `G(z) = e^z E1(z) = ∫₀^∞ e^{−s}/(s + z) ds`, summed by the trapezoid rule
/// in `q = ln s`, independent of the library quadrature.
pub fn g_fn(z: Complex64) -> Complex64 {
    let dq = 0.002;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut q: f64 = -50.0;
    while q < 4.5 {
        let s = q.exp();
        acc += (-s).exp() * s / (s + z);
        q += dq;
    }
    acc * dq
}

/// `û(η, t) = 2 Re[ln z + γ_E + G(z)]` with `z = η − it`.
pub fn u_oracle(eta: f64, t: f64) -> f64 {
    let z = Complex64::new(eta, -t);
    2.0 * (z.ln() + EULER + g_fn(z)).re
}

/// `(∂û/∂η, ∂û/∂t) = (2 Re G, 2 Im G)`.
pub fn grad_oracle(eta: f64, t: f64) -> (f64, f64) {
    let g = 2.0 * g_fn(Complex64::new(eta, -t));
    (g.re, g.im)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
