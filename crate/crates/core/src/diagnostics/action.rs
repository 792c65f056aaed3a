use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::energy::{energy_profile, EnergyGrid};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::trajectory::TrajectorySolution;

/// Sampling of the action curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ActionOptions {
    /// Number of geometric time samples after the origin.
    pub samples: usize,
    /// First positive reduced time sampled.
    pub t_min: f64,
    pub heights: EnergyGrid,
}

impl Default for ActionOptions {
    fn default() -> Self {
        Self {
            samples: 150,
            t_min: 1e-4,
            heights: EnergyGrid::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ActionSample {
    /// `γτ`.
    pub tau: f64,
    /// `x/ξ`.
    pub x: f64,
    /// `A` in units of `ħ`.
    pub action: f64,
    /// `A_WKB = (2x/ħ)√(2mV)` in units of `ħ`.
    pub wkb: f64,
    /// `A/A_WKB`, `1` at the origin.
    pub ratio: f64,
    /// `dA/dA_WKB`, the slope ratio of the two exponents.
    pub local_ratio: f64,
}

/// Underbarrier action along a trajectory, parametrized by the particle position.
#[derive(Clone, Debug, Serialize)]
pub struct ActionCurve {
    pub samples: Vec<ActionSample>,
    /// `ħγ/V`, the only model dependence of `A` in units of `ħ`.
    pub hbar_gamma_over_v: f64,
}

impl ActionCurve {
    /// Sample linearly interpolated at `x/ξ`, `None` outside the sampled range.
    pub fn at_x(&self, x: f64) -> Option<ActionSample> {
        let s = &self.samples;
        let k = s.iter().position(|p| p.x >= x)?;
        if k == 0 {
            return (s[0].x == x).then_some(s[0]);
        }
        let (a, b) = (s[k - 1], s[k]);
        let w = (x - a.x) / (b.x - a.x);
        let lerp = |p: f64, q: f64| p + w * (q - p);
        Some(ActionSample {
            tau: lerp(a.tau, b.tau),
            x,
            action: lerp(a.action, b.action),
            wkb: lerp(a.wkb, b.wkb),
            ratio: lerp(a.ratio, b.ratio),
            local_ratio: lerp(a.local_ratio, b.local_ratio),
        })
    }
}

/// `∫₀^t v̂² dt'` of the piecewise-linear velocity.
fn speed_square_integral(traj: &TrajectorySolution, cumulative: &[f64], t: f64) -> f64 {
    let nodes = traj.times();
    let k = traj.grid.locate(t.min(traj.end_time()));
    let (a, b) = (nodes[k], nodes[k + 1]);
    let va = traj.v[k];
    let beta = (traj.v[k + 1] - va) / (b - a);
    let d = t.min(b) - a;
    cumulative[k] + va * va * d + va * beta * d * d + beta * beta * d * d * d / 3.0
}

/// Action `A = −(4/ħ)∫T dτ` with `T` the imaginary-time kinetic energy of
/// particle and string, against the dissipation-free WKB action.
pub fn action_curve(
    traj: &TrajectorySolution,
    opts: &ActionOptions,
    exec: Execution,
) -> Result<ActionCurve> {
    let end = traj.end_time();
    if !(opts.t_min > 0.0 && opts.t_min < end) || opts.samples < 2 {
        return Err(Error::InvalidGrid(format!(
            "action samples need 0 < t_min < {end} and at least 2 points"
        )));
    }
    let n = opts.samples;
    let ratio = end / opts.t_min;
    let mut taus = vec![0.0];
    taus.extend((0..n).map(|k| opts.t_min * ratio.powf(k as f64 / (n - 1) as f64)));
    *taus.last_mut().expect("nonempty") = end;
    let energies = energy_profile(traj, &taus, &opts.heights, exec)?;

    let nodes = traj.times();
    let mut cumulative = vec![0.0; nodes.len()];
    for k in 1..nodes.len() {
        let (va, vb) = (traj.v[k - 1], traj.v[k]);
        cumulative[k] =
            cumulative[k - 1] + (nodes[k] - nodes[k - 1]) * (va * va + va * vb + vb * vb) / 3.0;
    }

    let hg = traj.scales.semiclassical_ratio();
    let mut string_part = 0.0;
    let mut samples = Vec::with_capacity(taus.len());
    for (k, e) in energies.iter().enumerate() {
        let t = taus[k];
        if k > 0 {
            let prev = &energies[k - 1];
            string_part += 0.5 * (t - taus[k - 1]) * (prev.string_kinetic + e.string_kinetic);
        }
        // A = (4/π²)(V/ħγ)∫(v̂² + π²K̂) dt and A_WKB = (4/π)(V/ħγ) x̂.
        let integral = speed_square_integral(traj, &cumulative, t) + PI * PI * string_part;
        let x = traj.position_at(t);
        let v = traj.velocity_at(t);
        let action = 4.0 / (PI * PI * hg) * integral;
        let wkb = 4.0 / (PI * hg) * x;
        samples.push(ActionSample {
            tau: t,
            x,
            action,
            wkb,
            ratio: if k == 0 { 1.0 } else { integral / (PI * x) },
            local_ratio: (v * v + PI * PI * e.string_kinetic) / (PI * v),
        });
    }
    Ok(ActionCurve {
        samples,
        hbar_gamma_over_v: hg,
    })
}

/// Straight-line fit `ln(1 − E_p/V) = slope·x/ξ + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentialFit {
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
}

/// Least-squares fit of the particle-energy deficit `1 − E_p/V = v̂²/π²`
/// against position on `[x_lo, x_hi]` (reduced), `points` equally spaced
/// positions.
pub fn particle_energy_asymptote(
    traj: &TrajectorySolution,
    x_lo: f64,
    x_hi: f64,
    points: usize,
) -> Result<ExponentialFit> {
    if !(x_hi > x_lo) || points < 2 {
        return Err(Error::InvalidScenario(
            "fit window must be nonempty with at least 2 points".into(),
        ));
    }
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for k in 0..points {
        let x = x_lo + (x_hi - x_lo) * k as f64 / (points - 1) as f64;
        let t = traj
            .time_at_position(x)
            .ok_or_else(|| Error::NoSolution(format!("trajectory never reaches x/xi = {x}")))?;
        let v = traj.velocity_at(t);
        let y = (v * v / (PI * PI)).ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let n = points as f64;
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    Ok(ExponentialFit {
        slope,
        intercept: (sy - slope * sx) / n,
        points,
    })
}
