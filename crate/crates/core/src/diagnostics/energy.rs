use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::kernel::{energy_y_grid, reconstruct_gradient, StringField};
use crate::special::exp1;
use crate::trajectory::{TrajectoryEnd, TrajectorySolution};

/// Largest tolerated share of the elastic energy supplied by the tail
/// closure beyond the last `η`.
pub const COVERAGE_LIMIT: f64 = 1e-3;

/// Energy partition at one reduced time, in units of `V`.
///
/// The string kinetic part is the positive magnitude `(ρ/2)∫u_τ² dy`; the
/// conserved total is `E_p + E_elastic − E_kinetic`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    pub tau: f64,
    pub particle: f64,
    pub string_elastic: f64,
    pub string_kinetic: f64,
    pub total: f64,
    /// Share of the elastic energy carried by the `1/η²` tail closure.
    pub tail_fraction: f64,
}

impl EnergyBreakdown {
    /// Elastic minus kinetic string energy.
    pub fn string(&self) -> f64 {
        self.string_elastic - self.string_kinetic
    }
}

/// Geometric `η = yγ/s` grid for the string energy quadrature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnergyGrid {
    pub lo: f64,
    pub hi: f64,
    pub per_decade: usize,
}

impl Default for EnergyGrid {
    fn default() -> Self {
        Self {
            lo: 1e-8,
            hi: 1e6,
            per_decade: 40,
        }
    }
}

impl EnergyGrid {
    pub fn build(&self) -> Result<Vec<f64>> {
        if !(self.lo > 0.0 && self.hi > self.lo && self.per_decade >= 2) {
            return Err(Error::InvalidGrid(format!(
                "energy grid needs 0 < lo < hi and at least 2 points per decade, got {self:?}"
            )));
        }
        Ok(energy_y_grid(self.lo, self.hi, self.per_decade))
    }
}

/// `∫₀^∞ g(η) dη` from samples on an ascending grid: linear on a leading
/// `[0, η₁]` segment, trapezoid in `ln η` after, `a/η²` beyond the end.
/// Returns the body and the tail separately.
fn half_line_integral(ys: &[f64], g: impl Fn(usize) -> f64) -> (f64, f64) {
    let mut body = 0.0;
    let start = if ys[0] == 0.0 {
        body += 0.5 * ys[1] * (g(0) + g(1));
        1
    } else {
        0
    };
    for k in start + 1..ys.len() {
        let dq = (ys[k] / ys[k - 1]).ln();
        body += 0.5 * dq * (g(k - 1) * ys[k - 1] + g(k) * ys[k]);
    }
    let last = ys.len() - 1;
    (body, ys[last] * g(last))
}

/// Energy partition at reduced time `tau`, which must be a column of `field`.
pub fn energy_breakdown(
    traj: &TrajectorySolution,
    field: &StringField,
    tau: f64,
) -> Result<EnergyBreakdown> {
    let it = field.column(tau).ok_or(Error::MissingTau(tau))?;
    let ys = &field.y;
    if ys.len() < 3 || ys.windows(2).any(|w| !(w[1] > w[0])) || ys[1] <= 0.0 {
        return Err(Error::InvalidGrid(
            "energy quadrature needs an ascending grid of heights".into(),
        ));
    }
    let at = |k: usize| field.index(k, it);
    let (el_body, el_tail) = half_line_integral(ys, |k| field.slope[at(k)].powi(2));
    let (kin_body, kin_tail) = half_line_integral(ys, |k| field.velocity[at(k)].powi(2));
    let elastic = (el_body + el_tail) / (PI * PI);
    let tail_fraction = el_tail / (el_body + el_tail);
    if tail_fraction > COVERAGE_LIMIT {
        return Err(Error::GridCoverage {
            truncated_fraction: tail_fraction,
        });
    }
    let kinetic = (kin_body + kin_tail) / (PI * PI);
    let t = field.tau[it];
    let v = traj.velocity_at(t);
    let particle = 1.0 - v * v / (PI * PI);
    Ok(EnergyBreakdown {
        tau: t,
        particle,
        string_elastic: elastic,
        string_kinetic: kinetic,
        total: particle + elastic - kinetic,
        tail_fraction,
    })
}

/// Energy partition at each of `taus`.
pub fn energy_profile(
    traj: &TrajectorySolution,
    taus: &[f64],
    grid: &EnergyGrid,
    exec: Execution,
) -> Result<Vec<EnergyBreakdown>> {
    let ys = grid.build()?;
    let field = reconstruct_gradient(traj, &ys, taus, exec);
    taus.iter()
        .map(|&t| energy_breakdown(traj, &field, t))
        .collect()
}

// ∫₀¹ (1 − w) e^{−xw} dw and ∫₀¹ w e^{−xw} dw.
fn hat_laplace(x: f64) -> (f64, f64) {
    if x < 0.5 {
        let (mut a, mut b) = (0.0, 0.0);
        let mut term = 1.0;
        for k in 0..20 {
            let kf = k as f64;
            a += term / ((kf + 1.0) * (kf + 2.0));
            b += term / (kf + 2.0);
            term *= -x / (kf + 1.0);
        }
        (a, b)
    } else {
        let e = (-x).exp();
        ((x - 1.0 + e) / (x * x), (1.0 - (1.0 + x) * e) / (x * x))
    }
}

struct Laplace<'a> {
    nodes: &'a [f64],
    v: &'a [f64],
    tail: Option<(f64, f64)>,
}

impl Laplace<'_> {
    /// `∫₀^∞ v̂(t) e^{−pt} dt` of the piecewise-linear velocity and its tail.
    fn eval(&self, p: f64) -> f64 {
        let mut acc = 0.0;
        for k in 0..self.nodes.len() - 1 {
            let (a, b) = (self.nodes[k], self.nodes[k + 1]);
            let decay = (-p * a).exp();
            if decay == 0.0 {
                break;
            }
            let h = b - a;
            let (wa, wb) = hat_laplace(p * h);
            acc += h * decay * (self.v[k] * wa + self.v[k + 1] * wb);
        }
        if let Some((cap, c)) = self.tail {
            acc += c * exp1(p * cap);
        }
        acc
    }

    /// `(2/π³) ∫₀^∞ L(p)² dp`, trapezoid in `ln p`.
    fn energy(&self, exec: Execution) -> f64 {
        const Q_LO: f64 = -40.0;
        const Q_HI: f64 = 30.0;
        const DQ: f64 = 0.02;
        let n = ((Q_HI - Q_LO) / DQ).round() as usize;
        let f = exec.map(n + 1, |k| {
            let p = (Q_LO + k as f64 * DQ).exp();
            let l = self.eval(p);
            (p * l * l, l)
        });
        let mut sum: f64 = f.iter().map(|x| x.0).sum();
        sum -= 0.5 * (f[0].0 + f[n].0);
        // L ~ v̂(0)/p at large p.
        let upper = f[n].0;
        2.0 / PI.powi(3) * (sum * DQ + upper)
    }
}

/// Total energy `E/V` as the double integral
/// `(2/π³) ∫∫ v̂(t₁) v̂(t₂)/(t₁ + t₂) dt₁ dt₂`, evaluated through the Laplace
/// transform of the velocity.
pub fn total_energy_double_integral(traj: &TrajectorySolution, exec: Execution) -> f64 {
    let tail = match traj.end {
        TrajectoryEnd::Decay { amplitude } => Some((traj.end_time(), amplitude)),
        TrajectoryEnd::Exit { .. } => None,
    };
    Laplace {
        nodes: traj.times(),
        v: &traj.v,
        tail,
    }
    .energy(exec)
}

/// The double integral with the velocity set to zero beyond reduced time `cut`.
pub fn total_energy_truncated(traj: &TrajectorySolution, cut: f64, exec: Execution) -> Result<f64> {
    let nodes = traj.times();
    if !(cut > 0.0) {
        return Err(Error::OutOfRange(cut));
    }
    if cut >= traj.end_time() {
        let v = &traj.v;
        return Ok(Laplace {
            nodes,
            v,
            tail: None,
        }
        .energy(exec));
    }
    let k = traj.grid.locate(cut);
    let mut t: Vec<f64> = nodes[..=k].to_vec();
    let mut v: Vec<f64> = traj.v[..=k].to_vec();
    if cut > t[k] {
        t.push(cut);
        v.push(traj.velocity_at(cut));
    }
    Ok(Laplace {
        nodes: &t,
        v: &v,
        tail: None,
    }
    .energy(exec))
}
