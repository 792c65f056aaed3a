//! Product-integration weights for the friction operator on piecewise-linear
//! velocities.
//!
//! Two operators are assembled. The principal-value operator
//!
//! ```text
//! (Hv)(t) = (1/π) P∫₋∞^∞ v(s)/(t − s) ds
//! ```
//!
//! acts on odd `v` (the even extension of `x`), and its integral from `0` to
//! `t`, the logarithmic operator
//!
//! ```text
//! (Lv)(t) = (1/π) ∫₀^∞ v(s) ln|(t − s)/(t + s)| ds,
//! ```
//!
//! is what the solver inverts. Beyond the last node `v = c/s`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::grid::TauGrid;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::special::{chi2, dilog, gl8_unit};

/// How the tail amplitude `c` of `v = c/s` is tied to the nodal values.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailFit {
    /// `c = T·v_N`, continuous at the cap.
    #[default]
    LastNode,
    /// Least-squares fit of `c/s` over nodes in `[T/10, T]`.
    LastDecade,
}

impl TailFit {
    /// Weights `(j, w_j)` with `c = Σ w_j v_j`.
    pub fn weights(self, nodes: &[f64]) -> Vec<(usize, f64)> {
        let n = nodes.len() - 1;
        let cap = nodes[n];
        match self {
            TailFit::LastNode => vec![(n, cap)],
            TailFit::LastDecade => {
                let idx: Vec<usize> = (1..=n).filter(|&j| nodes[j] >= 0.1 * cap).collect();
                let norm: f64 = idx.iter().map(|&j| nodes[j].powi(-2)).sum();
                idx.into_iter()
                    .map(|j| (j, 1.0 / (nodes[j] * norm)))
                    .collect()
            }
        }
    }
}

/// Whether the odd extension is folded into the kernel or kept as explicit
/// mirrored panels.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FoldMode {
    #[default]
    Folded,
    Mirrored,
}

// Panels closer than this many widths to a singular point use closed forms.
const NEAR: f64 = 2.0;

fn ln_abs0(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.abs().ln()
    }
}

/// `∫ φ/(t − s) ds` over `[a, b]` for the two hat functions, keeping only the
/// finite part when `t` is an endpoint.
fn pv_panel(t: f64, a: f64, b: f64) -> (f64, f64) {
    let h = b - a;
    let dist = if t < a {
        a - t
    } else if t > b {
        t - b
    } else {
        0.0
    };
    if dist >= NEAR * h {
        let (x, w) = gl8_unit();
        let (mut l, mut r) = (0.0, 0.0);
        for k in 0..8 {
            let f = w[k] / (t - a - h * x[k]);
            l += (1.0 - x[k]) * f;
            r += x[k] * f;
        }
        return (h * l, h * r);
    }
    let j = ln_abs0(t - a) - ln_abs0(t - b);
    ((b - t) / h * j + 1.0, (t - a) / h * j - 1.0)
}

fn a0(w: f64) -> f64 {
    if w == 0.0 {
        0.0
    } else {
        w * (w.abs().ln() - 1.0)
    }
}

fn a1(w: f64) -> f64 {
    if w == 0.0 {
        0.0
    } else {
        w * w * (0.5 * w.abs().ln() - 0.25)
    }
}

/// `∫ φ ln|t − s| ds` over `[a, b]` for the two hat functions.
fn log_panel(t: f64, a: f64, b: f64) -> (f64, f64) {
    let h = b - a;
    let dist = if t < a {
        a - t
    } else if t > b {
        t - b
    } else {
        0.0
    };
    if dist >= NEAR * h {
        let (x, w) = gl8_unit();
        let (mut l, mut r) = (0.0, 0.0);
        for k in 0..8 {
            let f = w[k] * (t - a - h * x[k]).abs().ln();
            l += (1.0 - x[k]) * f;
            r += x[k] * f;
        }
        return (h * l, h * r);
    }
    let (wa, wb) = (a - t, b - t);
    let m0 = a0(wb) - a0(wa);
    let right = (a1(wb) - a1(wa) - wa * m0) / h;
    (m0 - right, right)
}

/// Folded log kernel `ln|t − s| − ln(t + s)` on one panel, `s ≥ 0`.
fn folded_log_panel(t: f64, a: f64, b: f64) -> (f64, f64) {
    let h = b - a;
    let dist = if t < a {
        a - t
    } else if t > b {
        t - b
    } else {
        0.0
    };
    if dist >= NEAR * h {
        // ln(|t − s|/(t + s)) = ln(1 − 2 min(s, t)/(t + s)), accurate when s ≫ t or s ≪ t.
        let (x, w) = gl8_unit();
        let (mut l, mut r) = (0.0, 0.0);
        for k in 0..8 {
            let s = a + h * x[k];
            let f = w[k] * (-2.0 * s.min(t) / (t + s)).ln_1p();
            l += (1.0 - x[k]) * f;
            r += x[k] * f;
        }
        return (h * l, h * r);
    }
    let (dl, dr) = log_panel(t, a, b);
    let (ml, mr) = log_panel(-t, a, b);
    (dl - ml, dr - mr)
}

fn check_grid(grid: &TauGrid) -> Result<()> {
    if grid.intervals() < 3 {
        return Err(Error::GridTooCoarse(format!(
            "{} intervals, the kernel stencil needs at least 3",
            grid.intervals()
        )));
    }
    let cap = grid.tau_max();
    let decade = grid.nodes().iter().filter(|&&t| t >= 0.1 * cap).count();
    if decade < 3 {
        return Err(Error::GridTooCoarse(format!(
            "{decade} nodes in the last decade, the tail fit needs at least 3"
        )));
    }
    Ok(())
}

fn assemble<F>(grid: &TauGrid, exec: Execution, row: F) -> DMatrix<f64>
where
    F: Fn(usize, &mut [f64]) + Sync + Send,
{
    let n = grid.len();
    let mut data = vec![0.0; n * n];
    exec.fill_rows(&mut data, n, row);
    DMatrix::from_row_slice(n, n, &data)
}

/// Weights `W` with `(W v)_i ≈ (Hv)(t_i)`. Row 0 is left empty: the operator
/// diverges logarithmically at the velocity jump.
pub fn assemble_pv_kernel(
    grid: &TauGrid,
    tail: TailFit,
    mode: FoldMode,
    exec: Execution,
) -> Result<DMatrix<f64>> {
    check_grid(grid)?;
    let nodes = grid.nodes();
    let n = grid.intervals();
    let cap = grid.tau_max();
    let tail_w = tail.weights(nodes);
    Ok(assemble(grid, exec, |i, row| {
        if i == 0 {
            return;
        }
        let t = nodes[i];
        let tail_k = match mode {
            FoldMode::Folded => {
                for p in 0..n {
                    let (a, b) = (nodes[p], nodes[p + 1]);
                    let (dl, dr) = pv_panel(t, a, b);
                    let (ml, mr) = pv_panel(-t, a, b);
                    row[p] += (dl + ml) / PI;
                    row[p + 1] += (dr + mr) / PI;
                }
                // ∫_T^∞ (1/s)[1/(t − s) − 1/(t + s)] ds, finite part at t = T.
                -(ln_abs0(cap + t) - ln_abs0(cap - t)) / (PI * t)
            }
            FoldMode::Mirrored => {
                for p in 0..n {
                    let (a, b) = (nodes[p], nodes[p + 1]);
                    let (rl, rr) = pv_panel(t, a, b);
                    row[p] += rl / PI;
                    row[p + 1] += rr / PI;
                    // Panel [−b, −a] carries −v_{p+1} on the left, −v_p on the right.
                    let (ll, lr) = pv_panel(t, -b, -a);
                    row[p + 1] -= ll / PI;
                    row[p] -= lr / PI;
                }
                let right = (ln_abs0(cap - t) - cap.ln()) / t;
                let left = -((cap + t).ln() - cap.ln()) / t;
                (right + left) / PI
            }
        };
        for &(j, w) in &tail_w {
            row[j] += tail_k * w;
        }
    }))
}

/// Weights `M` with `(M v)_i ≈ (Lv)(t_i)`. Without a tail `v` is taken to
/// vanish beyond the last node.
pub fn assemble_log_kernel(
    grid: &TauGrid,
    tail: Option<TailFit>,
    mode: FoldMode,
    exec: Execution,
) -> Result<DMatrix<f64>> {
    check_grid(grid)?;
    let nodes = grid.nodes();
    let n = grid.intervals();
    let cap = grid.tau_max();
    let tail_w = tail.map(|t| t.weights(nodes)).unwrap_or_default();
    Ok(assemble(grid, exec, |i, row| {
        if i == 0 {
            return;
        }
        let t = nodes[i];
        let z = (t / cap).min(1.0);
        let tail_k = match mode {
            FoldMode::Folded => {
                for p in 0..n {
                    let (l, r) = folded_log_panel(t, nodes[p], nodes[p + 1]);
                    row[p] += l / PI;
                    row[p + 1] += r / PI;
                }
                -2.0 * chi2(z) / PI
            }
            FoldMode::Mirrored => {
                // Unfolded kernel ln|t − s| − ln|s|; the ln|s| part cancels between sides.
                for p in 0..n {
                    let (a, b) = (nodes[p], nodes[p + 1]);
                    let (rl, rr) = log_panel(t, a, b);
                    let (zl, zr) = log_panel(0.0, a, b);
                    row[p] += (rl - zl) / PI;
                    row[p + 1] += (rr - zr) / PI;
                    let (ll, lr) = log_panel(t, -b, -a);
                    let (yl, yr) = log_panel(0.0, -b, -a);
                    row[p + 1] -= (ll - yl) / PI;
                    row[p] -= (lr - yr) / PI;
                }
                (dilog(-z) - dilog(z)) / PI
            }
        };
        for &(j, w) in &tail_w {
            row[j] += tail_k * w;
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_panel_matches_quadrature() {
        // Closed form against a midpoint rule in w with s = t ± w², which
        // removes the logarithmic singularity when t lies inside the panel.
        for &(t, a, b) in &[(0.3, 0.1, 0.2), (0.15, 0.1, 0.2), (-0.05, 0.1, 0.2)] {
            let (l, r) = log_panel(t, a, b);
            let (mut ql, mut qr) = (0.0, 0.0);
            let mut side = |lo: f64, hi: f64| {
                // Integrate over [lo, hi], which has t at one end or outside.
                let (sign, near, far) = if t <= lo {
                    (1.0, lo - t, hi - t)
                } else {
                    (-1.0, t - hi, t - lo)
                };
                let (w0, w1) = (near.sqrt(), far.sqrt());
                let m = 200_000;
                let h = (w1 - w0) / m as f64;
                for k in 0..m {
                    let w = w0 + (k as f64 + 0.5) * h;
                    let s = t + sign * w * w;
                    let g = (w * w).ln() * 2.0 * w * h;
                    ql += (b - s) / (b - a) * g;
                    qr += (s - a) / (b - a) * g;
                }
            };
            if t > a && t < b {
                side(a, t);
                side(t, b);
            } else {
                side(a, b);
            }
            assert!(
                (l - ql).abs() < 1e-8 && (r - qr).abs() < 1e-8,
                "{t} {a} {b}: {l} {ql} {r} {qr}"
            );
        }
    }

    #[test]
    fn far_and_near_rules_agree_at_threshold() {
        let (a, b) = (1.0, 1.1);
        let t = b + NEAR * 0.1;
        let near = {
            let j = (t - a).ln() - (t - b).ln();
            ((b - t) / 0.1 * j + 1.0, (t - a) / 0.1 * j - 1.0)
        };
        let far = pv_panel(t, a, b);
        assert!((near.0 - far.0).abs() < 1e-12 && (near.1 - far.1).abs() < 1e-12);
    }
}
