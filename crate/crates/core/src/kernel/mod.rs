//! Discretized friction kernel, trajectory solver and string-field
//! reconstruction.

mod assembly;
mod field;
mod grid;
mod solver;

pub use assembly::{assemble_log_kernel, assemble_pv_kernel, FoldMode, TailFit};
pub use field::{
    energy_y_grid, reconstruct_field, reconstruct_gradient, FieldEvaluator, StringField,
};
pub use grid::{GridSpec, TauGrid, MIN_NODES_PER_UNIT, MIN_TAU_MAX};
pub use solver::{solve_flat, solve_general, SolverOptions};
