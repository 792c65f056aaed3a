//! Sampled imaginary-time trajectories and the potentials that drive them.

use std::collections::hash_map::DefaultHasher;
use std::f64::consts::PI;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::Serialize;

use crate::analytic::reduced;
use crate::error::Result;
use crate::exec::Execution;
use crate::kernel::TauGrid;
use crate::model::{Scales, StringModel};
use crate::quad::{integrate, QuadratureSpec};

/// Barrier shape beyond the well.
#[derive(Clone, Default)]
pub enum PotentialSpec {
    /// `V(x) = V`.
    #[default]
    Flat,
    /// `V(x) = V − F x` with `F = eE₀` in energy per length.
    LinearTilt {
        force: f64,
    },
    Custom(CustomPotential),
}

/// A barrier `V(x) = V + ∫₀^x V'` given by its continuously differentiable
/// slope on a declared domain of physical positions.
#[derive(Clone)]
pub struct CustomPotential {
    slope: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    domain: (f64, f64),
    label: String,
}

impl CustomPotential {
    pub fn new<F>(label: impl Into<String>, domain: (f64, f64), slope: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            slope: Arc::new(slope),
            domain,
            label: label.into(),
        }
    }

    pub fn slope(&self, x: f64) -> f64 {
        (self.slope)(x)
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Debug for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Flat => f.write_str("Flat"),
            Self::LinearTilt { force } => write!(f, "LinearTilt {{ force: {force} }}"),
            Self::Custom(c) => write!(f, "Custom({:?} on {:?})", c.label, c.domain),
        }
    }
}

impl PotentialSpec {
    /// Reduced outward force `f̂ = −V'(x)·π²ξ/(2V)` at reduced position `x̂`.
    pub fn reduced_force(&self, x_hat: f64, sc: &Scales) -> f64 {
        let unit = PI * PI * sc.xi / (2.0 * sc.barrier);
        match self {
            Self::Flat => 0.0,
            Self::LinearTilt { force } => force * unit,
            Self::Custom(c) => -c.slope(x_hat * sc.xi) * unit,
        }
    }

    /// `df̂/dx̂`, by central difference for custom potentials.
    pub fn reduced_force_derivative(&self, x_hat: f64, sc: &Scales) -> f64 {
        match self {
            Self::Custom(_) => {
                let h = 1e-6 * (1.0 + x_hat.abs());
                (self.reduced_force(x_hat + h, sc) - self.reduced_force(x_hat - h, sc)) / (2.0 * h)
            }
            _ => 0.0,
        }
    }

    /// `V(x)/V` at reduced position `x̂ ≥ 0`.
    pub fn reduced_potential(&self, x_hat: f64, sc: &Scales, spec: &QuadratureSpec) -> Result<f64> {
        Ok(match self {
            Self::Flat => 1.0,
            Self::LinearTilt { force } => 1.0 - force * sc.xi * x_hat / sc.barrier,
            Self::Custom(c) => {
                let rise = integrate(|x| c.slope(x), 0.0, x_hat * sc.xi, spec)?.value;
                1.0 + rise / sc.barrier
            }
        })
    }

    pub fn is_flat(&self) -> bool {
        match self {
            Self::Flat => true,
            Self::LinearTilt { force } => *force == 0.0,
            Self::Custom(_) => false,
        }
    }

    /// Physical domain on which the potential is defined.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            Self::Custom(c) => c.domain,
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }
}

/// What happens beyond the last node.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TrajectoryEnd {
    /// `v̂ = c/t` beyond the cap.
    Decay { amplitude: f64 },
    /// The particle stops (`v̂ = 0`) at the last node, `γτ*`.
    Exit { tau: f64 },
}

/// Conditions under which results are reported but outside the regime the
/// classical description is built for.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Warning {
    /// `ħγ ≥ V`.
    NonSemiclassical { hbar_gamma_over_v: f64 },
    /// `F ≥ V/ξ`: the tilt is too strong for a bow state.
    BowConditionViolated { force_xi_over_v: f64 },
    /// `F ≥ V/ξ_q`: beyond the quantum limit of the tilt.
    QuantumLimit { force_xi_q_over_v: f64 },
}

/// Validity warnings for a model and barrier.
pub fn validity_warnings(sc: &Scales, potential: &PotentialSpec) -> Vec<Warning> {
    let mut out = Vec::new();
    if sc.semiclassical_ratio() >= 1.0 {
        out.push(Warning::NonSemiclassical {
            hbar_gamma_over_v: sc.semiclassical_ratio(),
        });
    }
    if let PotentialSpec::LinearTilt { force } = potential {
        let ratio = force * sc.xi / sc.barrier;
        if ratio >= 1.0 {
            out.push(Warning::BowConditionViolated {
                force_xi_over_v: ratio,
            });
        }
        if *force >= sc.quantum_field() {
            out.push(Warning::QuantumLimit {
                force_xi_q_over_v: force / sc.quantum_field(),
            });
        }
    }
    out
}

/// Position and velocity on a reduced time grid.
#[derive(Clone, Debug, Serialize)]
pub struct TrajectorySolution {
    pub scales: Scales,
    /// Reduced times `γτ_i`.
    pub grid: TauGrid,
    /// `x_i/ξ`.
    pub x: Vec<f64>,
    /// `v_i/(ξγ)`; the launch speed is `π`.
    pub v: Vec<f64>,
    pub end: TrajectoryEnd,
    pub converged: bool,
    /// Sup norm of the discrete residual of the time-integrated equation of
    /// motion, reduced units.
    pub residual_norm: f64,
    pub iterations: usize,
    pub warnings: Vec<Warning>,
    #[serde(skip)]
    pub potential: PotentialSpec,
}

impl TrajectorySolution {
    /// Closed-form flat-barrier state sampled on `grid`.
    pub fn analytic(
        model: &StringModel,
        grid: &TauGrid,
        spec: &QuadratureSpec,
        exec: Execution,
    ) -> Result<Self> {
        let scales = model.scales()?;
        let nodes = grid.nodes();
        let samples: Result<Vec<(f64, f64)>> = exec
            .map(nodes.len(), |i| {
                Ok((
                    reduced::x(nodes[i], spec)?,
                    reduced::velocity(nodes[i], spec)?,
                ))
            })
            .into_iter()
            .collect();
        let (x, v): (Vec<f64>, Vec<f64>) = samples?.into_iter().unzip();
        let amplitude = grid.tau_max() * v[v.len() - 1];
        Ok(Self {
            scales,
            grid: grid.clone(),
            x,
            v,
            end: TrajectoryEnd::Decay { amplitude },
            converged: true,
            residual_norm: 0.0,
            iterations: 0,
            warnings: validity_warnings(&scales, &PotentialSpec::Flat),
            potential: PotentialSpec::Flat,
        })
    }

    pub fn times(&self) -> &[f64] {
        self.grid.nodes()
    }

    /// Reduced time after which the sampled data ends.
    pub fn end_time(&self) -> f64 {
        self.grid.tau_max()
    }

    /// Piecewise-linear velocity, continued by the end condition.
    pub fn velocity_at(&self, t: f64) -> f64 {
        let nodes = self.times();
        if t >= self.end_time() {
            return match self.end {
                TrajectoryEnd::Decay { amplitude } => amplitude / t,
                TrajectoryEnd::Exit { .. } => 0.0,
            };
        }
        let i = self.grid.locate(t);
        let (a, b) = (nodes[i], nodes[i + 1]);
        let w = (t - a) / (b - a);
        self.v[i] * (1.0 - w) + self.v[i + 1] * w
    }

    /// Position consistent with the piecewise-linear velocity.
    pub fn position_at(&self, t: f64) -> f64 {
        let nodes = self.times();
        let cap = self.end_time();
        let n = nodes.len() - 1;
        if t >= cap {
            return match self.end {
                TrajectoryEnd::Decay { amplitude } => self.x[n] + amplitude * (t / cap).ln(),
                TrajectoryEnd::Exit { .. } => self.x[n],
            };
        }
        let i = self.grid.locate(t);
        let (a, b) = (nodes[i], nodes[i + 1]);
        let d = t - a;
        let slope = (self.v[i + 1] - self.v[i]) / (b - a);
        self.x[i] + self.v[i] * d + 0.5 * slope * d * d
    }

    /// Reduced time of the first sample at or beyond position `x̂`.
    pub fn time_at_position(&self, x_hat: f64) -> Option<f64> {
        let k = self.x.iter().position(|&x| x >= x_hat)?;
        if k == 0 {
            return Some(0.0);
        }
        // Invert the quadratic position law inside the interval.
        let nodes = self.times();
        let (a, b) = (nodes[k - 1], nodes[k]);
        let slope = (self.v[k] - self.v[k - 1]) / (b - a);
        let need = x_hat - self.x[k - 1];
        let v0 = self.v[k - 1];
        let d = if slope.abs() < 1e-300 {
            need / v0
        } else {
            let disc = (v0 * v0 + 2.0 * slope * need).max(0.0);
            2.0 * need / (v0 + disc.sqrt())
        };
        Some(a + d.clamp(0.0, b - a))
    }

    /// Stable fingerprint of the sampled data.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        for s in [self.times(), &self.x[..], &self.v[..]] {
            for x in s {
                x.to_bits().hash(&mut h);
            }
        }
        h.finish()
    }

    /// Reduced time at which the velocity first drops to half its launch value.
    pub fn half_decay_time(&self) -> Option<f64> {
        let half = 0.5 * self.v[0];
        let k = self.v.iter().position(|&v| v <= half)?;
        if k == 0 {
            return Some(0.0);
        }
        let nodes = self.times();
        let w = (self.v[k - 1] - half) / (self.v[k - 1] - self.v[k]);
        Some(nodes[k - 1] + w * (nodes[k] - nodes[k - 1]))
    }
}
