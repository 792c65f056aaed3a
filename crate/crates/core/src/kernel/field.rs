//! Harmonic extension of the trajectory into the string.
//!
//! With `ζ = t + iη` the displacement and its gradient follow from the
//! boundary velocity alone:
//!
//! ```text
//! û(η, t)       = (1/π) ∫₀^∞ v̂(s) [arg(s − t + iη) + arg(s + t + iη)] ds,
//! û_η + i û_t   = (1/π) ∫₀^∞ v̂(s) [1/(s − ζ) + 1/(s + ζ)] ds.
//! ```
//!
//! Both are integrated exactly over each linear velocity panel.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::exec::Execution;
use crate::quad::{integrate, QuadratureSpec};
use crate::special::gl8_unit;
use crate::trajectory::{TrajectoryEnd, TrajectorySolution};

const NEAR: f64 = 2.0;

// Smallest height used for gradients on the particle line.
const ETA_FLOOR: f64 = 1e-13;

/// Pointwise evaluator of the reconstructed field of one trajectory.
#[derive(Clone, Debug)]
pub struct FieldEvaluator<'a> {
    traj: &'a TrajectorySolution,
    tail: Option<f64>,
    spec: QuadratureSpec,
}

fn clog(z: Complex64) -> Complex64 {
    z.ln()
}

impl<'a> FieldEvaluator<'a> {
    pub fn new(traj: &'a TrajectorySolution) -> Self {
        let tail = match traj.end {
            TrajectoryEnd::Decay { amplitude } => Some(amplitude),
            TrajectoryEnd::Exit { .. } => None,
        };
        Self {
            traj,
            tail,
            spec: QuadratureSpec::with_rel_tol(1e-12),
        }
    }

    fn panels(&self) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        let t = self.traj.times();
        let v = &self.traj.v;
        (0..t.len() - 1).map(move |p| (t[p], t[p + 1], v[p], v[p + 1]))
    }

    /// `û(η, t)`; `η = 0` returns the trajectory itself.
    pub fn displacement(&self, eta: f64, t: f64) -> Result<f64> {
        let eta = eta.abs();
        if eta == 0.0 {
            return Ok(self.traj.position_at(t.abs()));
        }
        let t = t.abs();
        let zeta = Complex64::new(t, eta);
        let (gx, gw) = gl8_unit();
        let mut acc = 0.0;
        for (a, b, va, vb) in self.panels() {
            let h = b - a;
            let dist = panel_distance(zeta, a, b);
            if dist >= NEAR * h {
                let mut q = 0.0;
                for k in 0..8 {
                    let s = a + h * gx[k];
                    let vs = va + (vb - va) * gx[k];
                    q += gw[k] * vs * (eta.atan2(s - t) + eta.atan2(s + t));
                }
                acc += h * q;
            } else {
                let beta = (vb - va) / h;
                let alpha = va - beta * a;
                // Im ∫(α + βs)[ln(s + ζ) − ln(s − ζ)] ds.
                let prim = |w0: Complex64, shift: Complex64, s: f64| {
                    let w = Complex64::new(s, 0.0) + w0;
                    let lw = clog(w);
                    (alpha + beta * shift) * (w * lw - w) + beta * (w * w * lw * 0.5 - w * w * 0.25)
                };
                let plus = prim(zeta, -zeta, b) - prim(zeta, -zeta, a);
                let minus = prim(-zeta, zeta, b) - prim(-zeta, zeta, a);
                acc += (plus - minus).im;
            }
        }
        let mut u = acc / PI;
        if let Some(c) = self.tail {
            let cap = self.traj.end_time();
            let tail = integrate(
                |r: f64| {
                    if r == 0.0 {
                        return 2.0 * eta / cap;
                    }
                    let s = cap / r;
                    (eta.atan2(s - t) + eta.atan2(s + t)) / r
                },
                0.0,
                1.0,
                &self.spec,
            )?;
            u += c * tail.value / PI;
        }
        Ok(u)
    }

    /// `(∂û/∂η, ∂û/∂t)`; on the particle line the `η → 0⁺` limit.
    pub fn gradient(&self, eta: f64, t: f64) -> (f64, f64) {
        let sign_eta = if eta < 0.0 { -1.0 } else { 1.0 };
        let sign_t = if t < 0.0 { -1.0 } else { 1.0 };
        let eta = eta.abs().max(ETA_FLOOR * (1.0 + t.abs()));
        let zeta = Complex64::new(t.abs(), eta);
        let (gx, gw) = gl8_unit();
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, b, va, vb) in self.panels() {
            let h = b - a;
            let dist = panel_distance(zeta, a, b);
            if dist >= NEAR * h {
                let mut q = Complex64::new(0.0, 0.0);
                for k in 0..8 {
                    let s = a + h * gx[k];
                    let vs = va + (vb - va) * gx[k];
                    q += gw[k] * vs * (1.0 / (s - zeta) + 1.0 / (s + zeta));
                }
                acc += h * q;
            } else {
                let beta = (vb - va) / h;
                let alpha = va - beta * a;
                let minus = (alpha + beta * zeta) * (clog(b - zeta) - clog(a - zeta));
                let plus = (alpha - beta * zeta) * (clog(b + zeta) - clog(a + zeta));
                acc += 2.0 * beta * h + minus + plus;
            }
        }
        if let Some(c) = self.tail {
            let cap = self.traj.end_time();
            acc += c / zeta * (clog(cap + zeta) - clog(cap - zeta));
        }
        let z = acc / PI;
        (sign_eta * z.re, sign_t * z.im)
    }
}

fn panel_distance(z: Complex64, a: f64, b: f64) -> f64 {
    let dx = if z.re < a {
        a - z.re
    } else if z.re > b {
        z.re - b
    } else {
        0.0
    };
    // The mirrored singularity at −ζ is always farther for panels on s ≥ 0.
    dx.hypot(z.im)
}

/// Displacement and gradient on a rectangular `(η ≥ 0, t)` grid in reduced
/// units, stored time-major.
#[derive(Clone, Debug, Serialize)]
pub struct StringField {
    /// `yγ/s`, nonnegative.
    pub y: Vec<f64>,
    /// `γτ`.
    pub tau: Vec<f64>,
    /// `u/ξ`.
    pub u: Vec<f64>,
    /// `∂û/∂η`, the `η → 0⁺` limit on the first row when `y[0] = 0`.
    pub slope: Vec<f64>,
    /// `∂û/∂t`.
    pub velocity: Vec<f64>,
    /// Fingerprint of the trajectory the field was built from.
    pub source: u64,
}

impl StringField {
    pub fn index(&self, iy: usize, it: usize) -> usize {
        it * self.y.len() + iy
    }

    pub fn u_at(&self, iy: usize, it: usize) -> f64 {
        self.u[self.index(iy, it)]
    }

    /// Column index of reduced time `t`.
    pub fn column(&self, t: f64) -> Option<usize> {
        self.tau
            .iter()
            .position(|&x| (x - t).abs() <= 1e-12 * (1.0 + t.abs()))
    }
}

/// Reconstruct the string field of `traj` on `ys × taus` (reduced units).
pub fn reconstruct_field(
    traj: &TrajectorySolution,
    ys: &[f64],
    taus: &[f64],
    exec: Execution,
) -> Result<StringField> {
    let eval = FieldEvaluator::new(traj);
    let ys: Vec<f64> = ys.iter().map(|y| y.abs()).collect();
    let ny = ys.len();
    let cells: Result<Vec<(f64, f64, f64)>> = exec
        .map(ny * taus.len(), |k| {
            let (eta, t) = (ys[k % ny], taus[k / ny]);
            let u = eval.displacement(eta, t)?;
            let (ue, ut) = eval.gradient(eta, t);
            Ok((u, ue, ut))
        })
        .into_iter()
        .collect();
    let cells = cells?;
    Ok(StringField {
        u: cells.iter().map(|c| c.0).collect(),
        slope: cells.iter().map(|c| c.1).collect(),
        velocity: cells.iter().map(|c| c.2).collect(),
        y: ys,
        tau: taus.to_vec(),
        source: traj.fingerprint(),
    })
}

/// Gradient-only reconstruction, for energy quadratures that do not need `u`.
pub fn reconstruct_gradient(
    traj: &TrajectorySolution,
    ys: &[f64],
    taus: &[f64],
    exec: Execution,
) -> StringField {
    let eval = FieldEvaluator::new(traj);
    let ys: Vec<f64> = ys.iter().map(|y| y.abs()).collect();
    let ny = ys.len();
    let cells = exec.map(ny * taus.len(), |k| eval.gradient(ys[k % ny], taus[k / ny]));
    StringField {
        u: Vec::new(),
        slope: cells.iter().map(|c| c.0).collect(),
        velocity: cells.iter().map(|c| c.1).collect(),
        y: ys,
        tau: taus.to_vec(),
        source: traj.fingerprint(),
    }
}

/// Geometric `η` grid used for energy integrals: `0` followed by
/// `per_decade` points per decade on `[lo, hi]`.
pub fn energy_y_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let n = (decades * per_decade as f64).ceil() as usize;
    let mut ys = Vec::with_capacity(n + 2);
    ys.push(0.0);
    ys.extend((0..=n).map(|k| lo * 10f64.powf(decades * k as f64 / n as f64)));
    ys
}
