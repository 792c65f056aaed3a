//! Physical parameters, derived scales and reduced units.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Particle of mass `m` under a barrier of height `V`, coupled to a string of
/// linear density `rho` and sound speed `s`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StringModel {
    pub m: f64,
    #[serde(rename = "V")]
    pub v: f64,
    pub rho: f64,
    pub s: f64,
    #[serde(default = "one")]
    pub hbar: f64,
}

fn one() -> f64 {
    1.0
}

impl StringModel {
    pub fn new(m: f64, v: f64, rho: f64, s: f64) -> Result<Self> {
        Self::with_hbar(m, v, rho, s, 1.0)
    }

    pub fn with_hbar(m: f64, v: f64, rho: f64, s: f64, hbar: f64) -> Result<Self> {
        let model = Self { m, v, rho, s, hbar };
        model.validate()?;
        Ok(model)
    }

    /// Model whose reduced scales are all unity: `γ = 1`, `ξ = 1`, `V = 1`.
    pub fn unit() -> Self {
        // γ = 2ρs/m = 1 and ξ = √(2V/m)/(πγ) = 1 give m = 2/π².
        let m = 2.0 / (PI * PI);
        Self {
            m,
            v: 1.0,
            rho: m / 2.0,
            s: 1.0,
            hbar: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check = |name: &str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidModel(format!(
                    "{name} must be positive and finite, got {x}"
                )))
            }
        };
        check("m", self.m)?;
        check("V", self.v)?;
        check("s", self.s)?;
        check("hbar", self.hbar)?;
        if self.rho == 0.0 {
            return Err(Error::InfiniteCoherence);
        }
        check("rho", self.rho)
    }

    pub fn scales(&self) -> Result<Scales> {
        self.validate()?;
        let gamma = 2.0 * self.rho * self.s / self.m;
        let v0 = (2.0 * self.v / self.m).sqrt();
        let xi = v0 / (PI * gamma);
        let xi_q = (self.hbar / (self.m * gamma)).sqrt();
        Ok(Scales {
            gamma,
            v0,
            xi,
            xi_q,
            barrier: self.v,
            hbar: self.hbar,
            sound_speed: self.s,
            mass: self.m,
        })
    }
}

/// Derived scales of a [`StringModel`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scales {
    /// Damping rate `2ρs/m`.
    pub gamma: f64,
    /// Velocity right after the bounce, `√(2V/m)`.
    pub v0: f64,
    /// Classical coherence length `v0/(πγ)`.
    pub xi: f64,
    /// Quantum length `√(ħ/(mγ))`.
    pub xi_q: f64,
    pub barrier: f64,
    pub hbar: f64,
    pub sound_speed: f64,
    pub mass: f64,
}

impl Scales {
    /// Field above which a tilt is no longer semiclassical, `V/ξ_q`.
    pub fn quantum_field(&self) -> f64 {
        self.barrier / self.xi_q
    }

    /// `ħγ/V`; the classical description needs this to be small.
    pub fn semiclassical_ratio(&self) -> f64 {
        self.hbar * self.gamma / self.barrier
    }

    pub fn units(&self) -> ReducedUnits {
        ReducedUnits { scales: *self }
    }
}

/// Physical quantities that have a natural reduced unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantityKind {
    /// Imaginary time, reduced by `1/γ`.
    Time,
    /// Particle position, reduced by `ξ`.
    Position,
    /// Particle velocity, reduced by `ξγ`.
    Velocity,
    /// Energy, reduced by `V`.
    Energy,
    /// Action, reduced by `V/γ`.
    Action,
    /// Force, reduced by `V/ξ`.
    Force,
    /// Coordinate along the string, reduced by `s/γ`.
    StringCoordinate,
    /// String displacement, reduced by `ξ`.
    Displacement,
}

impl QuantityKind {
    pub const ALL: [QuantityKind; 8] = [
        Self::Time,
        Self::Position,
        Self::Velocity,
        Self::Energy,
        Self::Action,
        Self::Force,
        Self::StringCoordinate,
        Self::Displacement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Time => "time",
            Self::Position => "position",
            Self::Velocity => "velocity",
            Self::Energy => "energy",
            Self::Action => "action",
            Self::Force => "force",
            Self::StringCoordinate => "string_coordinate",
            Self::Displacement => "displacement",
        }
    }
}

impl fmt::Display for QuantityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for QuantityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownKind(s.to_string()))
    }
}

/// Conversion between physical and reduced values.
#[derive(Clone, Copy, Debug)]
pub struct ReducedUnits {
    scales: Scales,
}

impl ReducedUnits {
    pub fn unit(&self, kind: QuantityKind) -> f64 {
        let s = &self.scales;
        match kind {
            QuantityKind::Time => 1.0 / s.gamma,
            QuantityKind::Position | QuantityKind::Displacement => s.xi,
            QuantityKind::Velocity => s.xi * s.gamma,
            QuantityKind::Energy => s.barrier,
            QuantityKind::Action => s.barrier / s.gamma,
            QuantityKind::Force => s.barrier / s.xi,
            QuantityKind::StringCoordinate => s.sound_speed / s.gamma,
        }
    }

    pub fn to_reduced(&self, kind: QuantityKind, value: f64) -> f64 {
        value / self.unit(kind)
    }

    pub fn to_physical(&self, kind: QuantityKind, value: f64) -> f64 {
        value * self.unit(kind)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_model_has_unit_scales() {
        let sc = StringModel::unit().scales().unwrap();
        assert!((sc.gamma - 1.0).abs() < 1e-15);
        assert!((sc.xi - 1.0).abs() < 1e-15);
        assert!((sc.v0 - PI).abs() < 1e-15);
    }

    #[test]
    fn zero_density_is_infinite_coherence() {
        assert!(matches!(
            StringModel::new(1.0, 1.0, 0.0, 1.0),
            Err(Error::InfiniteCoherence)
        ));
        assert!(matches!(
            StringModel::new(-1.0, 1.0, 1.0, 1.0),
            Err(Error::InvalidModel(_))
        ));
    }

    #[test]
    fn kind_parsing() {
        assert_eq!(
            "energy".parse::<QuantityKind>().unwrap(),
            QuantityKind::Energy
        );
        assert!(
            matches!("entropy".parse::<QuantityKind>(), Err(Error::UnknownKind(k)) if k == "entropy")
        );
    }
}
