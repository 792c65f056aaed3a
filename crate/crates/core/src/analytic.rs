//! Closed-form bow state of the flat barrier.
//!
//! In reduced variables `t = γτ`, `η = γ|y|/s`, `w = ω/γ` the string
//! displacement is
//!
//! ```text
//! û(η, t) = ∫₀^∞ K(w) [1 − e^{−wη} cos wt] dw,   K(w) = 2/(w(w+1)),
//! ```
//!
//! with `u = ξ·û`. The particle sits at the string end, `x(τ) = u(0, τ)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::model::StringModel;
use crate::quad::{integrate, oscillatory_tail, QuadratureSpec};
use crate::roots::brent;
use crate::special::{exp1_scaled, EULER_GAMMA};

/// Evaluations in reduced units (`γ = ξ = s/γ = 1`).
pub mod reduced {
    use super::*;

    fn kernel(w: f64) -> f64 {
        2.0 / (w * (w + 1.0))
    }

    // 1 − e^{−wη} cos wt without cancellation at small w.
    fn one_minus_damped_cos(w: f64, eta: f64, t: f64) -> f64 {
        let half = (0.5 * w * t).sin();
        -(-w * eta).exp_m1() * (w * t).cos() + 2.0 * half * half
    }

    fn tan_integral<F: Fn(f64) -> f64>(f: F, w_max: f64, spec: &QuadratureSpec) -> Result<f64> {
        let theta_max = if w_max.is_infinite() {
            0.5 * PI
        } else {
            w_max.atan()
        };
        let r = integrate(
            |th: f64| {
                let w = th.tan();
                f(w) * (1.0 + w * w)
            },
            0.0,
            theta_max,
            spec,
        )?;
        Ok(r.value)
    }

    // First zero at or above `omega_tail` of cos(wt) (phase = 0.5) or sin(wt) (phase = 0).
    fn tail_start(t: f64, phase: f64, spec: &QuadratureSpec) -> f64 {
        let k = (spec.omega_tail * t / PI - phase)
            .ceil()
            .max(if phase == 0.0 { 1.0 } else { 0.0 });
        (k + phase) * PI / t
    }

    /// String displacement `û(η, t)`; even in both arguments.
    pub fn u(eta: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
        let eta = eta.abs();
        let t = t.abs();
        if t == 0.0 {
            if eta == 0.0 {
                return Ok(0.0);
            }
            return tan_integral(|w| -kernel(w) * (-w * eta).exp_m1(), f64::INFINITY, spec);
        }
        let big_w = tail_start(t, 0.5, spec);
        let head = tan_integral(|w| kernel(w) * one_minus_damped_cos(w, eta, t), big_w, spec)?;
        let plain_tail = 2.0 * (1.0 / big_w).ln_1p();
        let osc = if big_w * eta > 700.0 {
            0.0
        } else {
            oscillatory_tail(
                |w: f64| kernel(w) * (-w * eta).exp() * (w * t).cos(),
                big_w,
                PI / t,
                &tail_spec(spec, head),
            )?
            .value
        };
        Ok(head + plain_tail - osc)
    }

    // Tail accuracy is judged against the whole integral, not the small tail.
    fn tail_spec(spec: &QuadratureSpec, scale: f64) -> QuadratureSpec {
        QuadratureSpec {
            abs_tol: spec.abs_tol.max(spec.rel_tol * scale.abs()),
            ..*spec
        }
    }

    /// Particle position `x̂(t) = û(0, t)`.
    pub fn x(t: f64, spec: &QuadratureSpec) -> Result<f64> {
        u(0.0, t, spec)
    }

    /// Particle velocity `v̂(t) = 2∫ sin(wt)/(w+1) dw`; `π` at `t = 0⁺`.
    pub fn velocity(t: f64, spec: &QuadratureSpec) -> Result<f64> {
        if t == 0.0 {
            return Ok(PI);
        }
        let sign = t.signum();
        let t = t.abs();
        let f = |w: f64| 2.0 * (w * t).sin() / (w + 1.0);
        oscillating(f, t, 0.0, spec).map(|v| sign * v)
    }

    /// `∂û/∂η` for `η > 0`.
    pub fn slope(eta: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
        if eta <= 0.0 {
            return Err(Error::InvalidScenario(
                "string slope is discontinuous at the particle, evaluate at y > 0".into(),
            ));
        }
        let t = t.abs();
        if t == 0.0 {
            return Ok(2.0 * exp1_scaled(eta));
        }
        let f = |w: f64| 2.0 * (-w * eta).exp() * (w * t).cos() / (w + 1.0);
        oscillating(f, t, 0.5, spec)
    }

    /// `∂û/∂t`, odd in `t`.
    pub fn string_velocity(eta: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
        let eta = eta.abs();
        if eta == 0.0 {
            return velocity(t, spec);
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        let sign = t.signum();
        let t = t.abs();
        let f = |w: f64| 2.0 * (-w * eta).exp() * (w * t).sin() / (w + 1.0);
        oscillating(f, t, 0.0, spec).map(|v| sign * v)
    }

    fn oscillating<F: Fn(f64) -> f64>(
        f: F,
        t: f64,
        phase: f64,
        spec: &QuadratureSpec,
    ) -> Result<f64> {
        let big_w = tail_start(t, phase, spec);
        let head = integrate(&f, 0.0, big_w, spec)?.value;
        let tail = if f(big_w + 0.5 * PI / t) == 0.0 {
            0.0
        } else {
            oscillatory_tail(&f, big_w, PI / t, &tail_spec(spec, head))?.value
        };
        Ok(head + tail)
    }

    /// Small-time limit `x̂ ≈ πt`.
    pub fn x_small_time(t: f64) -> f64 {
        PI * t
    }

    /// Large-time limit `x̂ ≈ 2(ln t + γ_E)`.
    pub fn x_large_time(t: f64) -> f64 {
        2.0 * (t.ln() + EULER_GAMMA)
    }

    /// Time at which the particle reaches `x̂ > 0`.
    pub fn time_at(x_hat: f64, spec: &QuadratureSpec) -> Result<f64> {
        if !(x_hat.is_finite() && x_hat > 0.0) {
            return Err(Error::OutOfRange(x_hat));
        }
        // v̂ ≤ π bounds from below; the asymptote bounds from above.
        let lo = x_hat / PI;
        let hi = (0.5 * x_hat - EULER_GAMMA).exp().max(lo) * 1.01;
        brent(|t| Ok(x(t, spec)? - x_hat), lo, hi, 1e-14 * hi, 200)
    }
}

/// Displacement `u(y, τ)` of the string, in physical units.
pub fn eval_u(model: &StringModel, y: f64, tau: f64, spec: &QuadratureSpec) -> Result<f64> {
    let sc = model.scales()?;
    let eta = sc.gamma * y / sc.sound_speed;
    Ok(sc.xi * reduced::u(eta, sc.gamma * tau, spec)?)
}

/// Particle position `x(τ) = u(0, τ)`.
pub fn eval_x(model: &StringModel, tau: f64, spec: &QuadratureSpec) -> Result<f64> {
    eval_u(model, 0.0, tau, spec)
}

/// Particle velocity `dx/dτ`; equals `√(2V/m)` at `τ = 0⁺`.
pub fn eval_velocity(model: &StringModel, tau: f64, spec: &QuadratureSpec) -> Result<f64> {
    let sc = model.scales()?;
    Ok(sc.xi * sc.gamma * reduced::velocity(sc.gamma * tau, spec)?)
}

/// String slope `∂u/∂y` at `y ≠ 0`.
pub fn eval_string_slope(
    model: &StringModel,
    y: f64,
    tau: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let sc = model.scales()?;
    let eta = sc.gamma * y / sc.sound_speed;
    let sign = if y < 0.0 { -1.0 } else { 1.0 };
    Ok(sign * sc.xi * sc.gamma / sc.sound_speed * reduced::slope(eta.abs(), sc.gamma * tau, spec)?)
}

/// String velocity `∂u/∂τ`.
pub fn eval_string_velocity(
    model: &StringModel,
    y: f64,
    tau: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let sc = model.scales()?;
    let eta = sc.gamma * y / sc.sound_speed;
    Ok(sc.xi * sc.gamma * reduced::string_velocity(eta, sc.gamma * tau, spec)?)
}

/// Particle energy `E_p = −m v²/2 + V` on the flat barrier.
pub fn eval_particle_energy(model: &StringModel, tau: f64, spec: &QuadratureSpec) -> Result<f64> {
    let v = eval_velocity(model, tau, spec)?;
    Ok(model.v - 0.5 * model.m * v * v)
}

/// Imaginary time at which the particle reaches `x > 0`.
pub fn time_at_position(model: &StringModel, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    let sc = model.scales()?;
    Ok(reduced::time_at(x / sc.xi, spec)? / sc.gamma)
}

/// Which branch of the piecewise asymptotic position applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitRegime {
    /// `γτ ≤ 0.01`: `x = ξπγτ`.
    SmallTime,
    /// `γτ ≥ 100`: `x = 2ξ ln γτ`.
    LargeTime,
    /// In between no asymptotic form holds; the value is the full quadrature.
    Interpolated,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LimitingX {
    pub x: f64,
    pub regime: LimitRegime,
}

pub const SMALL_TIME_LIMIT: f64 = 0.01;
pub const LARGE_TIME_LIMIT: f64 = 100.0;

/// Piecewise asymptotic position. The large-time branch drops the constant
/// `2ξγ_E` of the exact asymptote `2ξ(ln γτ + γ_E)`.
pub fn limiting_x(model: &StringModel, tau: f64, spec: &QuadratureSpec) -> Result<LimitingX> {
    if !(tau >= 0.0) {
        return Err(Error::OutOfRange(tau));
    }
    let sc = model.scales()?;
    let t = sc.gamma * tau;
    Ok(if t <= SMALL_TIME_LIMIT {
        LimitingX {
            x: sc.xi * PI * t,
            regime: LimitRegime::SmallTime,
        }
    } else if t >= LARGE_TIME_LIMIT {
        LimitingX {
            x: 2.0 * sc.xi * t.ln(),
            regime: LimitRegime::LargeTime,
        }
    } else {
        LimitingX {
            x: sc.xi * reduced::x(t, spec)?,
            regime: LimitRegime::Interpolated,
        }
    })
}

/// One point of a string profile, in reduced units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProfileSample {
    /// `yγ/s`
    pub y: f64,
    /// `γτ`
    pub tau: f64,
    /// `u/ξ`
    pub u: f64,
}

/// Profiles `u(y, τ)` on the tensor product of reduced `ys` and `taus`,
/// ordered by time then `y`.
pub fn profile_grid(
    ys: &[f64],
    taus: &[f64],
    spec: &QuadratureSpec,
    exec: Execution,
) -> Result<Vec<ProfileSample>> {
    let ny = ys.len();
    exec.map(ny * taus.len(), |k| {
        let (y, tau) = (ys[k % ny], taus[k / ny]);
        reduced::u(y, tau, spec).map(|u| ProfileSample { y, tau, u })
    })
    .into_iter()
    .collect()
}

/// Position and velocity at reduced times `taus`: rows of `(γτ, x/ξ, v/v0)`.
pub fn trajectory_table(
    taus: &[f64],
    spec: &QuadratureSpec,
    exec: Execution,
) -> Result<Vec<[f64; 3]>> {
    exec.map(taus.len(), |k| {
        let t = taus[k];
        Ok([t, reduced::x(t, spec)?, reduced::velocity(t, spec)? / PI])
    })
    .into_iter()
    .collect()
}
