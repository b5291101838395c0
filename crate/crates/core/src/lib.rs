//! Weighted k-traveling repairman problem: instances and solutions, the
//! multi-commodity flow formulation checker, valid-inequality separation,
//! an iterated local search and exact oracles for small instances.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the common `f64` and `f32` instantiations.

pub mod bench;
pub mod cuts;
mod error;
pub mod exact;
pub mod ils;
pub mod io;
pub mod milp;
pub mod model;
mod scalar;

pub use error::{Error, Result};
pub use scalar::{approx_eq, Scalar};

pub use cuts::{omega, separate_all, tau, Cut};
pub use exact::{brute_force_solve, exact_solve, ExactOutcome};
pub use ils::{ils_multi_run, ils_run, IlsOutcome, IlsParams};
pub use milp::{verify_constraints, ConstraintId, FractionalPoint, VariableAssignment};
pub use model::{evaluate_weighted_latency, Instance, Solution};

pub type InstanceF64 = Instance<f64>;
pub type InstanceF32 = Instance<f32>;
pub type FractionalPointF64 = FractionalPoint<f64>;
pub type FractionalPointF32 = FractionalPoint<f32>;
pub type IlsOutcomeF64 = IlsOutcome<f64>;
pub type IlsOutcomeF32 = IlsOutcome<f32>;
pub type ExactOutcomeF64 = ExactOutcome<f64>;
pub type ExactOutcomeF32 = ExactOutcome<f32>;
