//! Hydrogen atom above a polar dielectric: Debye response, friction regimes,
//! coherence length versus distance, van der Waals and Lamb-shift estimates.
//!
//! Inputs are in any consistent unit system; the preset uses SI. The electron
//! mass and `e²` are not inputs: they follow from the rydberg and the Bohr
//! radius through `e² = 2V a_B` and `m = ħ²/(2V a_B²)`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;

/// Whether a number is a formula evaluated exactly or an order-of-magnitude
/// estimate carrying no claim beyond its scaling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    Exact,
    Estimate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tagged {
    pub value: f64,
    pub precision: Precision,
}

impl Tagged {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            precision: Precision::Exact,
        }
    }

    pub fn estimate(value: f64) -> Self {
        Self {
            value,
            precision: Precision::Estimate,
        }
    }
}

/// Single-relaxation (Debye) dielectric with a phonon scale.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DielectricModel {
    pub eps0: f64,
    pub eps_inf: f64,
    /// Dipole relaxation frequency.
    pub omega0: f64,
    /// Phonon frequency.
    pub omega_ph: f64,
}

impl DielectricModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps0 > self.eps_inf && self.eps_inf >= 1.0) {
            return Err(Error::InvalidScenario(format!(
                "need eps0 > eps_inf >= 1, got eps0 = {}, eps_inf = {}",
                self.eps0, self.eps_inf
            )));
        }
        if !(self.omega0 > 0.0 && self.omega_ph > self.omega0 && self.omega_ph.is_finite()) {
            return Err(Error::InvalidScenario(format!(
                "need 0 < omega0 < omega_ph, got {} and {}",
                self.omega0, self.omega_ph
            )));
        }
        Ok(())
    }

    /// `ε(ω) = ε_∞ + (ε₀ − ε_∞)/(1 − iω/ω₀)`.
    pub fn epsilon(&self, omega: f64) -> Complex64 {
        self.eps_inf + (self.eps0 - self.eps_inf) / Complex64::new(1.0, -omega / self.omega0)
    }

    /// `∂ε''/∂ω` at `ω = 0`.
    pub fn loss_slope(&self) -> f64 {
        (self.eps0 - self.eps_inf) / self.omega0
    }
}

pub const FINE_STRUCTURE_INVERSE: f64 = 137.036;

fn default_fsi() -> f64 {
    FINE_STRUCTURE_INVERSE
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomDielectricScenario {
    /// Atom–surface distance.
    pub r: f64,
    pub a_b: f64,
    /// One rydberg, `V`.
    pub rydberg: f64,
    pub hbar: f64,
    pub dielectric: DielectricModel,
    /// `ħc/e²`.
    #[serde(default = "default_fsi")]
    pub fine_structure_inverse: f64,
}

/// SI values used by the preset.
pub mod si {
    pub const HBAR: f64 = 1.054_571_817e-34;
    pub const RYDBERG: f64 = 2.179_872_361_1e-18;
    pub const ANGSTROM: f64 = 1e-10;
}

impl AtomDielectricScenario {
    /// `a_B = 1 Å`, `V/ħω₀ = 10⁶`, `V/ħω_ph = 10³`, `ε₀ = 2`, `ε_∞ = 1`.
    pub fn preset(r_over_ab: f64) -> Self {
        let v_over_hbar = si::RYDBERG / si::HBAR;
        Self {
            r: r_over_ab * si::ANGSTROM,
            a_b: si::ANGSTROM,
            rydberg: si::RYDBERG,
            hbar: si::HBAR,
            dielectric: DielectricModel {
                eps0: 2.0,
                eps_inf: 1.0,
                omega0: v_over_hbar * 1e-6,
                omega_ph: v_over_hbar * 1e-3,
            },
            fine_structure_inverse: FINE_STRUCTURE_INVERSE,
        }
    }

    pub fn with_distance(&self, r: f64) -> Self {
        Self { r, ..*self }
    }

    pub fn validate(&self) -> Result<()> {
        self.dielectric.validate()?;
        for (name, x) in [
            ("a_b", self.a_b),
            ("rydberg", self.rydberg),
            ("hbar", self.hbar),
        ] {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::InvalidScenario(format!(
                    "{name} must be positive, got {x}"
                )));
            }
        }
        if !(self.fine_structure_inverse > 1.0) {
            return Err(Error::InvalidScenario("hbar*c/e^2 must exceed 1".into()));
        }
        if !(self.r > self.a_b) {
            return Err(Error::InvalidScenario(format!(
                "distance R = {} must exceed the Bohr radius {}",
                self.r, self.a_b
            )));
        }
        Ok(())
    }

    pub fn r_over_ab(&self) -> f64 {
        self.r / self.a_b
    }

    /// `V/ħω₀`.
    pub fn relaxation_ratio(&self) -> f64 {
        self.rydberg / (self.hbar * self.dielectric.omega0)
    }

    /// `V/ħω_ph`.
    pub fn phonon_ratio(&self) -> f64 {
        self.rydberg / (self.hbar * self.dielectric.omega_ph)
    }

    /// `e² = 2V a_B`.
    pub fn charge_squared(&self) -> f64 {
        2.0 * self.rydberg * self.a_b
    }

    /// `m = ħ²/(2V a_B²)`.
    pub fn electron_mass(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.rydberg * self.a_b * self.a_b)
    }

    /// Velocity scale `√(2V/m)`.
    pub fn launch_speed(&self) -> f64 {
        (2.0 * self.rydberg / self.electron_mass()).sqrt()
    }
}

/// `ħγ/V` of the ohmic (large-R) friction with the Debye loss slope.
pub fn damping_ohmic(scn: &AtomDielectricScenario) -> Result<Tagged> {
    scn.validate()?;
    let d = &scn.dielectric;
    let pref = (d.eps0 - d.eps_inf) / (2.0 * (1.0 + d.eps0).powi(2));
    Ok(Tagged::exact(
        pref * scn.relaxation_ratio() * scn.r_over_ab().powi(-3),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    SmallRNonohmic,
    IntermediateRNonohmic,
    LargeROhmic,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::SmallRNonohmic => "small_R_nonohmic",
            Regime::IntermediateRNonohmic => "intermediate_R_nonohmic",
            Regime::LargeROhmic => "large_R_ohmic",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Distances within this factor of a band edge are flagged as crossovers.
pub const CROSSOVER_FACTOR: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegimeReport {
    pub regime: Regime,
    /// `a_B V/ħω_ph`.
    pub r_small_intermediate: f64,
    /// `a_B V/ħω₀`.
    pub r_intermediate_large: f64,
    /// `γ` in the ohmic band, `1/τ₀` otherwise.
    pub effective_damping: Tagged,
    pub coherence_length: Tagged,
    /// Within a factor 3 of a band edge.
    pub crossover: bool,
}

fn band(scn: &AtomDielectricScenario) -> (Regime, f64, f64) {
    let lo = scn.a_b * scn.phonon_ratio();
    let hi = scn.a_b * scn.relaxation_ratio();
    let regime = if scn.r < lo {
        Regime::SmallRNonohmic
    } else if scn.r < hi {
        Regime::IntermediateRNonohmic
    } else {
        Regime::LargeROhmic
    };
    (regime, lo, hi)
}

/// Friction regime of the scenario; bands are half-open `[lower, upper)`.
pub fn classify_regime(scn: &AtomDielectricScenario) -> Result<RegimeReport> {
    scn.validate()?;
    let (regime, lo, hi) = band(scn);
    let near = |edge: f64| scn.r > edge / CROSSOVER_FACTOR && scn.r < edge * CROSSOVER_FACTOR;
    let effective_damping = match regime {
        Regime::LargeROhmic => Tagged::exact(damping_ohmic(scn)?.value * scn.rydberg / scn.hbar),
        _ => Tagged::estimate(1.0 / nonohmic_tau0(scn)?.value),
    };
    Ok(RegimeReport {
        regime,
        r_small_intermediate: lo,
        r_intermediate_large: hi,
        effective_damping,
        coherence_length: coherence_length(scn)?,
        crossover: near(lo) || near(hi),
    })
}

/// Piecewise coherence length: `a_B(V/ħω_ph)²`, `a_B(R/a_B)²`,
/// `a_B(ħω₀/V)(R/a_B)³` in the small, intermediate and large bands.
pub fn coherence_length(scn: &AtomDielectricScenario) -> Result<Tagged> {
    scn.validate()?;
    let rho = scn.r_over_ab();
    let ratio = match band(scn).0 {
        Regime::SmallRNonohmic => scn.phonon_ratio().powi(2),
        Regime::IntermediateRNonohmic => rho * rho,
        Regime::LargeROhmic => rho.powi(3) / scn.relaxation_ratio(),
    };
    Ok(Tagged::estimate(scn.a_b * ratio))
}

/// Characteristic time of the nonohmic trajectory: `(ħ/V)(R/a_B)²` at
/// intermediate distance, `(ħ/V)(V/ħω_ph)²` at small distance.
pub fn nonohmic_tau0(scn: &AtomDielectricScenario) -> Result<Tagged> {
    scn.validate()?;
    let unit = scn.hbar / scn.rydberg;
    match band(scn).0 {
        Regime::SmallRNonohmic => Ok(Tagged::estimate(unit * scn.phonon_ratio().powi(2))),
        Regime::IntermediateRNonohmic => Ok(Tagged::estimate(unit * scn.r_over_ab().powi(2))),
        found => Err(Error::WrongRegime {
            expected: "a nonohmic band".into(),
            found: found.to_string(),
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RepulsionBound {
    pub r_max: f64,
    /// The bound reached the large-R band and was clamped to its edge.
    pub capped: bool,
}

/// Largest distance at which the coherence length stays below `surface`.
pub fn repulsion_layer_bound(scn: &AtomDielectricScenario, surface: f64) -> Result<RepulsionBound> {
    scn.validate()?;
    let (_, lo, hi) = band(scn);
    let plateau = scn.a_b * scn.phonon_ratio().powi(2);
    if !(surface >= plateau) {
        return Err(Error::NoSolution(format!(
            "coherence length exceeds {surface} at every distance (small-R plateau {plateau})"
        )));
    }
    // Invert ξ = a_B(R/a_B)² in the intermediate band.
    let r = scn.a_b * (surface / scn.a_b).sqrt();
    if r >= hi {
        return Ok(RepulsionBound {
            r_max: hi,
            capped: true,
        });
    }
    Ok(RepulsionBound {
        r_max: r.max(lo),
        capped: false,
    })
}

/// Default `φ(ε₀)`: the constant that makes the hydrogen coefficient at
/// `ε₀ = 2`, `ħc/e² = 137.036` equal `37.3`.
pub fn default_phi(_eps0: f64) -> f64 {
    37.3 / vdw_prefactor(2.0, FINE_STRUCTURE_INVERSE, 4.5)
}

// −U R⁴/(V a_B⁴) without φ, for polarizability α = k a_B³.
fn vdw_prefactor(eps0: f64, fsi: f64, k: f64) -> f64 {
    // ħc = (ħc/e²)·2V a_B.
    3.0 * fsi * 2.0 * k / (8.0 * PI) * (eps0 - 1.0) / (eps0 + 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VdwEnergy {
    /// `U(R)`, negative.
    pub energy: Tagged,
    /// `−U R⁴/(V a_B⁴)`.
    pub coefficient: f64,
    /// `R > c/Ω₀` with `Ω₀ = V/ħ`.
    pub retarded_regime: bool,
}

/// `U = −(3ħcα/8πR⁴)·(ε₀ − 1)/(ε₀ + 1)·φ(ε₀)`.
pub fn vdw_energy(
    scn: &AtomDielectricScenario,
    alpha: f64,
    phi: impl Fn(f64) -> f64,
) -> Result<VdwEnergy> {
    scn.validate()?;
    let eps0 = scn.dielectric.eps0;
    let k = alpha / scn.a_b.powi(3);
    let coefficient = vdw_prefactor(eps0, scn.fine_structure_inverse, k) * phi(eps0);
    let c_over_omega = scn.fine_structure_inverse * 2.0 * scn.a_b;
    Ok(VdwEnergy {
        energy: Tagged::exact(-coefficient * scn.rydberg * scn.r_over_ab().powi(-4)),
        coefficient,
        retarded_regime: scn.r > c_over_omega,
    })
}

/// Hydrogen ground-state polarizability `9a_B³/2`.
pub fn hydrogen_polarizability(a_b: f64) -> f64 {
    4.5 * a_b.powi(3)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BowField {
    /// `eE_bow = (V/ξ)√(ħγ/V)`.
    pub field: Tagged,
    /// `ħγ ≥ V`.
    pub non_semiclassical: bool,
    /// `eE_bow < V/ξ`.
    pub within_bow_condition: bool,
}

pub fn bow_field_estimate(
    scn: &AtomDielectricScenario,
    xi: f64,
    gamma_eff: f64,
) -> Result<BowField> {
    scn.validate()?;
    if !(xi > 0.0 && gamma_eff >= 0.0) {
        return Err(Error::InvalidScenario(
            "need xi > 0 and gamma_eff >= 0".into(),
        ));
    }
    let ratio = scn.hbar * gamma_eff / scn.rydberg;
    let field = scn.rydberg / xi * ratio.sqrt();
    Ok(BowField {
        field: Tagged::estimate(field),
        non_semiclassical: ratio >= 1.0,
        within_bow_condition: field < scn.rydberg / xi,
    })
}

/// Vacuum Lamb shift `V g³ ln(1/g)` for coupling `g = e²/ħc`.
pub fn lamb_shift_usual(g: f64, rydberg: f64) -> Result<Tagged> {
    if !(g > 0.0 && g < 1.0) {
        return Err(Error::OutOfRange(g));
    }
    Ok(Tagged::estimate(rydberg * g.powi(3) * (1.0 / g).ln()))
}

/// Dielectric Lamb shift: `(ħγ/2π) ln(ħc/e²)` in the ohmic band, `ħγ_eff`
/// with `γ_eff = 1/τ₀` in the nonohmic bands.
pub fn lamb_shift_dielectric(scn: &AtomDielectricScenario, gamma_eff: f64) -> Result<Tagged> {
    scn.validate()?;
    if !(gamma_eff >= 0.0) {
        return Err(Error::OutOfRange(gamma_eff));
    }
    Ok(match band(scn).0 {
        Regime::LargeROhmic => {
            Tagged::exact(scn.hbar * gamma_eff / (2.0 * PI) * scn.fine_structure_inverse.ln())
        }
        _ => Tagged::estimate(scn.hbar * gamma_eff),
    })
}

/// Friction power at velocity `v`: `mγv²`, `(e²/R²)|v|` or `e²ω_ph²/|v|`.
pub fn dissipation_rate(scn: &AtomDielectricScenario, v: f64) -> Result<Tagged> {
    scn.validate()?;
    let e2 = scn.charge_squared();
    match band(scn).0 {
        Regime::LargeROhmic => {
            let gamma = damping_ohmic(scn)?.value * scn.rydberg / scn.hbar;
            Ok(Tagged::exact(scn.electron_mass() * gamma * v * v))
        }
        _ if v == 0.0 => Err(Error::ZeroVelocity),
        Regime::IntermediateRNonohmic => Ok(Tagged::estimate(e2 / (scn.r * scn.r) * v.abs())),
        Regime::SmallRNonohmic => Ok(Tagged::estimate(
            e2 * scn.dielectric.omega_ph.powi(2) / v.abs(),
        )),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoherencePoint {
    pub log10_r: f64,
    pub log10_xi: f64,
    pub regime: Regime,
}

/// `ξ(R)` on a logarithmic distance grid, `per_decade` points per decade of
/// `R/a_B` between `10^lo` and `10^hi`.
pub fn coherence_map(
    base: &AtomDielectricScenario,
    log10_lo: f64,
    log10_hi: f64,
    per_decade: usize,
    exec: Execution,
) -> Result<Vec<CoherencePoint>> {
    if !(log10_lo > 0.0 && log10_hi > log10_lo) || per_decade == 0 {
        return Err(Error::InvalidScenario(format!(
            "sweep needs 0 < lo < hi in log10(R/a_B), got [{log10_lo}, {log10_hi}]"
        )));
    }
    let n = ((log10_hi - log10_lo) * per_decade as f64).round() as usize;
    exec.map(n + 1, |k| {
        let log10_r = log10_lo + k as f64 / per_decade as f64;
        let scn = base.with_distance(base.a_b * 10f64.powf(log10_r));
        let xi = coherence_length(&scn)?.value;
        Ok(CoherencePoint {
            log10_r,
            log10_xi: (xi / scn.a_b).log10(),
            regime: band(&scn).0,
        })
    })
    .into_iter()
    .collect()
}
