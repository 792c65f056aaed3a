use serde::Serialize;

use super::energy::total_energy_double_integral;
use crate::error::{Error, Result};
use crate::kernel::{solve_general, SolverOptions, TauGrid};
use crate::model::StringModel;
use crate::trajectory::{PotentialSpec, TrajectoryEnd};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum SweepOutcome {
    Solved {
        /// `E/V`.
        energy: f64,
        /// Half-decay time of the velocity, `γτ₀`.
        tau0: Option<f64>,
        /// Turning point `γτ*` when the particle stops before the cap.
        exit: Option<f64>,
    },
    Failed {
        error: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepEntry {
    /// `eE₀`, energy per length.
    pub field: f64,
    /// `eE₀ξ/V`.
    pub reduced_field: f64,
    /// `eE₀ ≥ V/ξ_q`.
    pub beyond_quantum_limit: bool,
    /// `eE₀ ≥ V/ξ`.
    pub bow_condition_violated: bool,
    pub outcome: SweepOutcome,
}

impl SweepEntry {
    pub fn energy(&self) -> Option<f64> {
        match self.outcome {
            SweepOutcome::Solved { energy, .. } => Some(energy),
            SweepOutcome::Failed { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldSweepResult {
    pub entries: Vec<SweepEntry>,
    /// Reduced field `eE₀ξ/V` at which the bow energy first falls to `V/2`,
    /// interpolated in `ln eE₀`.
    pub crossover: Option<f64>,
}

impl FieldSweepResult {
    /// Whether the solved energies never increase with the field.
    pub fn is_monotone(&self, slack: f64) -> bool {
        let e: Vec<f64> = self.entries.iter().filter_map(SweepEntry::energy).collect();
        e.windows(2).all(|w| w[1] <= w[0] + slack)
    }
}

fn crossover(entries: &[SweepEntry]) -> Option<f64> {
    let solved: Vec<(f64, f64)> = entries
        .iter()
        .filter_map(|e| e.energy().map(|en| (e.reduced_field, en)))
        .collect();
    solved.windows(2).find_map(|w| {
        let ((f0, e0), (f1, e1)) = (w[0], w[1]);
        if e0 >= 0.5 && e1 < 0.5 {
            if f0 <= 0.0 {
                return Some(f1);
            }
            let s = (e0 - 0.5) / (e0 - e1);
            Some((f0.ln() + s * (f1.ln() - f0.ln())).exp())
        } else {
            None
        }
    })
}

/// Bow energy under a linear tilt `V(x) = V − eE₀x` for each field strength.
/// Entries that fail to solve are reported without aborting the sweep.
pub fn bow_energy_sweep(
    model: &StringModel,
    fields: &[f64],
    grid: &TauGrid,
    opts: &SolverOptions,
) -> Result<FieldSweepResult> {
    let sc = model.scales()?;
    if fields.iter().any(|f| !(f.is_finite() && *f >= 0.0)) {
        return Err(Error::InvalidScenario(
            "fields must be finite and nonnegative".into(),
        ));
    }
    if fields.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidScenario(
            "fields must be strictly ascending".into(),
        ));
    }
    let entries = opts.exec.map(fields.len(), |k| {
        let field = fields[k];
        let potential = PotentialSpec::LinearTilt { force: field };
        let outcome = match solve_general(model, &potential, grid, opts) {
            Ok(traj) => SweepOutcome::Solved {
                energy: total_energy_double_integral(&traj, opts.exec),
                tau0: traj.half_decay_time(),
                exit: match traj.end {
                    TrajectoryEnd::Exit { tau } => Some(tau),
                    TrajectoryEnd::Decay { .. } => None,
                },
            },
            Err(e) => SweepOutcome::Failed {
                error: e.to_string(),
            },
        };
        SweepEntry {
            field,
            reduced_field: field * sc.xi / sc.barrier,
            beyond_quantum_limit: field >= sc.quantum_field(),
            bow_condition_violated: field * sc.xi >= sc.barrier,
            outcome,
        }
    });
    let crossover = crossover(&entries);
    Ok(FieldSweepResult { entries, crossover })
}
