//! Energy partition, total-energy functionals, underbarrier action and the
//! bow energy under a tilting field.
//!
//! All quantities are reduced: times `γτ`, positions `x/ξ`, energies `E/V`,
//! actions in units of `ħ`.

mod action;
mod energy;
mod sweep;

pub use action::{
    action_curve, particle_energy_asymptote, ActionCurve, ActionOptions, ActionSample,
    ExponentialFit,
};
pub use energy::{
    energy_breakdown, energy_profile, total_energy_double_integral, total_energy_truncated,
    EnergyBreakdown, EnergyGrid, COVERAGE_LIMIT,
};
pub use sweep::{bow_energy_sweep, FieldSweepResult, SweepEntry, SweepOutcome};
