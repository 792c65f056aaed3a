//! Imaginary-time bow states of a particle escaping under a barrier while
//! coupled to an ohmic string, with the associated atom-above-dielectric
//! estimates.

// `!(x > y)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod atom_dielectric;
pub mod diagnostics;
pub mod error;
pub mod exec;
pub mod kernel;
pub mod model;
pub mod quad;
pub mod roots;
pub mod special;
pub mod trajectory;

pub use error::{Error, Result};
pub use exec::Execution;
pub use kernel::{GridSpec, SolverOptions, StringField, TauGrid};
pub use model::{QuantityKind, ReducedUnits, Scales, StringModel};
pub use quad::QuadratureSpec;
pub use trajectory::{PotentialSpec, TrajectorySolution};
