//! Damped Newton solution of the time-integrated equation of motion
//!
//! ```text
//! v̂(t) = π + (L v̂)(t) − ∫₀^t f̂(x̂(t')) dt',
//! ```
//!
//! whose first node row pins the launch speed `v̂(0) = π`.
//!
//! When the outward force stops the particle before the cap, the trajectory
//! ends at the turning point: the exit time `γτ*` is the root of `v̂(τ*) = 0`
//! for the system truncated at `τ*`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::assembly::{assemble_log_kernel, FoldMode, TailFit};
use super::grid::TauGrid;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::model::{Scales, StringModel};
use crate::roots::brent;
use crate::trajectory::{validity_warnings, PotentialSpec, TrajectoryEnd, TrajectorySolution};

/// Numerical controls of the trajectory solver.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverOptions {
    /// Target sup norm of the reduced residual.
    pub tol: f64,
    pub max_iter: usize,
    pub tail: TailFit,
    pub fold: FoldMode,
    pub exec: Execution,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 50,
            tail: TailFit::default(),
            fold: FoldMode::default(),
            exec: Execution::default(),
        }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

struct Iterate {
    v: Vec<f64>,
    x: Vec<f64>,
    residual: f64,
    iterations: usize,
}

fn cumulative_position(nodes: &[f64], v: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; v.len()];
    for i in 1..v.len() {
        x[i] = x[i - 1] + 0.5 * (nodes[i] - nodes[i - 1]) * (v[i - 1] + v[i]);
    }
    x
}

/// Discrete system on fixed nodes: `R(v) = v − M v − π + F(v)`.
struct System<'a> {
    nodes: &'a [f64],
    kernel: DMatrix<f64>,
    potential: &'a PotentialSpec,
    scales: &'a Scales,
}

impl System<'_> {
    /// Only the stretch before the particle stops has to stay in the domain.
    fn check_domain(&self, v: &[f64], x: &[f64]) -> Result<()> {
        let (lo, hi) = self.potential.domain();
        let moving = v.iter().position(|&v| v <= 0.0).unwrap_or(v.len());
        for (i, &xh) in x.iter().enumerate().take(moving) {
            let xp = xh * self.scales.xi;
            if xp < lo || xp > hi {
                return Err(Error::RunawayTrajectory {
                    tau: self.nodes[i],
                    x: xh,
                });
            }
        }
        Ok(())
    }

    // Positions outside the domain are clamped; they only occur after the stop.
    fn clamp(&self, x: f64) -> f64 {
        let (lo, hi) = self.potential.domain();
        (x * self.scales.xi).clamp(lo, hi) / self.scales.xi
    }

    fn force_integral(&self, x: &[f64]) -> Vec<f64> {
        let nodes = self.nodes;
        let mut out = vec![0.0; x.len()];
        let mut prev = self.potential.reduced_force(self.clamp(x[0]), self.scales);
        for i in 1..x.len() {
            let f = self.potential.reduced_force(self.clamp(x[i]), self.scales);
            out[i] = out[i - 1] + 0.5 * (nodes[i] - nodes[i - 1]) * (prev + f);
            prev = f;
        }
        out
    }

    fn residual(&self, v: &[f64], x: &[f64]) -> Vec<f64> {
        let vv = DVector::from_column_slice(v);
        let mv = &self.kernel * &vv;
        let force = self.force_integral(x);
        (0..v.len()).map(|i| v[i] - mv[i] - PI + force[i]).collect()
    }

    fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.nodes.len();
        let mut j = DMatrix::<f64>::identity(n, n) - &self.kernel;
        if matches!(self.potential, PotentialSpec::Custom(_)) {
            // dF_i/dv_j through the trapezoid recursions for F and x.
            let nodes = self.nodes;
            let h: Vec<f64> = (1..n).map(|i| nodes[i] - nodes[i - 1]).collect();
            let fp: Vec<f64> = x
                .iter()
                .map(|&xk| {
                    self.potential
                        .reduced_force_derivative(self.clamp(xk), self.scales)
                })
                .collect();
            let dx = |k: usize, col: usize| -> f64 {
                if k == 0 || col > k {
                    0.0
                } else if col == 0 {
                    0.5 * h[0]
                } else if col == k {
                    0.5 * h[k - 1]
                } else {
                    0.5 * (h[col - 1] + h[col])
                }
            };
            let mut prev = vec![0.0; n];
            for i in 1..n {
                let mut row = prev.clone();
                for (col, r) in row.iter_mut().enumerate().take(i + 1) {
                    *r += 0.5 * h[i - 1] * (fp[i - 1] * dx(i - 1, col) + fp[i] * dx(i, col));
                }
                for col in 0..n {
                    j[(i, col)] += row[col];
                }
                prev = row;
            }
        }
        j
    }

    fn solve(&self, init: Option<Vec<f64>>, opts: &SolverOptions) -> Result<Iterate> {
        let n = self.nodes.len();
        let linear = !matches!(self.potential, PotentialSpec::Custom(_));
        let mut v = match init {
            Some(v) => v,
            None => vec![PI; n],
        };
        let mut x = cumulative_position(self.nodes, &v);
        let mut r = self.residual(&v, &x);
        let mut norm = sup(&r);
        let mut best = norm;
        let mut iterations = 0;
        while iterations < opts.max_iter {
            if norm < opts.tol && iterations > 0 {
                break;
            }
            iterations += 1;
            let j = self.jacobian(&x);
            let rhs = DVector::from_iterator(n, r.iter().map(|x| -x));
            let delta = j.lu().solve(&rhs).ok_or(Error::SingularSystem)?;
            let mut lambda = 1.0;
            loop {
                let trial: Vec<f64> = v
                    .iter()
                    .zip(delta.iter())
                    .map(|(a, d)| a + lambda * d)
                    .collect();
                let tx = cumulative_position(self.nodes, &trial);
                if !linear {
                    self.check_domain(&trial, &tx)?;
                }
                let tr = self.residual(&trial, &tx);
                let tn = sup(&tr);
                if tn < norm || lambda < 1e-3 || linear {
                    v = trial;
                    x = tx;
                    r = tr;
                    norm = tn;
                    break;
                }
                lambda *= 0.5;
            }
            best = best.min(norm);
            if linear && iterations >= 2 {
                break;
            }
        }
        if !(norm < opts.tol) {
            return Err(Error::NonConvergence {
                iterations,
                best_residual: best,
            });
        }
        Ok(Iterate {
            v,
            x,
            residual: norm,
            iterations,
        })
    }
}

fn sup(r: &[f64]) -> f64 {
    r.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Flat-barrier trajectory.
pub fn solve_flat(
    model: &StringModel,
    grid: &TauGrid,
    opts: &SolverOptions,
) -> Result<TrajectorySolution> {
    solve_general(model, &PotentialSpec::Flat, grid, opts)
}

/// Trajectory under a general barrier beyond the well.
pub fn solve_general(
    model: &StringModel,
    potential: &PotentialSpec,
    grid: &TauGrid,
    opts: &SolverOptions,
) -> Result<TrajectorySolution> {
    let scales = model.scales()?;
    grid.validate()?;
    let kernel = assemble_log_kernel(grid, Some(opts.tail), opts.fold, opts.exec)?;
    let flat = System {
        nodes: grid.nodes(),
        kernel,
        potential: &PotentialSpec::Flat,
        scales: &scales,
    };
    let flat_sol = flat.solve(None, opts)?;
    let full = if potential.is_flat() && !matches!(potential, PotentialSpec::Custom(_)) {
        flat_sol
    } else {
        let sys = System { potential, ..flat };
        sys.solve(Some(flat_sol.v.clone()), opts)?
    };
    let warnings = validity_warnings(&scales, potential);
    let Some(stop) = full.v.iter().position(|&v| v <= 0.0) else {
        let amplitude = opts
            .tail
            .weights(grid.nodes())
            .iter()
            .map(|&(j, w)| w * full.v[j])
            .sum();
        return Ok(TrajectorySolution {
            scales,
            grid: grid.clone(),
            x: full.x,
            v: full.v,
            end: TrajectoryEnd::Decay { amplitude },
            converged: true,
            residual_norm: full.residual,
            iterations: full.iterations,
            warnings,
            potential: potential.clone(),
        });
    };
    solve_with_exit(&scales, potential, grid, opts, grid.nodes()[stop], warnings)
}

fn solve_with_exit(
    scales: &Scales,
    potential: &PotentialSpec,
    grid: &TauGrid,
    opts: &SolverOptions,
    first_stop: f64,
    warnings: Vec<crate::trajectory::Warning>,
) -> Result<TrajectorySolution> {
    let cap = grid.tau_max();
    let base = assemble_log_kernel(grid, None, opts.fold, opts.exec)?;
    let run = |exit: f64| -> Result<(TauGrid, Iterate)> {
        let scale = exit / cap;
        let scaled = grid.scaled(scale);
        let sys = System {
            nodes: scaled.nodes(),
            kernel: &base * scale,
            potential,
            scales,
        };
        let flat_guess = if matches!(potential, PotentialSpec::Custom(_)) {
            let flat = System {
                potential: &PotentialSpec::Flat,
                nodes: scaled.nodes(),
                kernel: sys.kernel.clone(),
                scales,
            };
            Some(flat.solve(None, opts)?.v)
        } else {
            None
        };
        let it = sys.solve(flat_guess, opts)?;
        Ok((scaled, it))
    };
    let end_speed = |exit: f64| -> Result<f64> { Ok(*run(exit)?.1.v.last().expect("nonempty")) };

    let mut hi = first_stop;
    let mut g_hi = end_speed(hi)?;
    while g_hi > 0.0 {
        hi *= 1.5;
        if hi > 10.0 * cap {
            return Err(Error::NoSolution(
                "the particle never stops on the solver window".into(),
            ));
        }
        g_hi = end_speed(hi)?;
    }
    let mut lo = 0.5 * hi;
    while end_speed(lo)? <= 0.0 {
        hi = lo;
        lo *= 0.5;
        if lo < 1e-12 * cap {
            return Err(Error::NoSolution("exit time collapsed to zero".into()));
        }
    }
    let exit = brent(end_speed, lo, hi, 1e-13 * hi, 200)?;
    let (scaled, it) = run(exit)?;
    Ok(TrajectorySolution {
        scales: *scales,
        grid: scaled,
        x: it.x,
        v: it.v,
        end: TrajectoryEnd::Exit { tau: exit },
        converged: true,
        residual_norm: it.residual,
        iterations: it.iterations,
        warnings,
        potential: potential.clone(),
    })
}
