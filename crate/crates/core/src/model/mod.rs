//! Instance and solution model, objective evaluation, feasibility checks and
//! variant transformations.

mod eval;
mod instance;
mod solution;
mod transform;

pub use eval::{
    check_feasibility, evaluate_weighted_latency, route_cost, route_duration, DeadlineViolation,
    DurationViolation, Evaluation, FeasibilityReport,
};
pub use instance::Instance;
pub use solution::Solution;
pub use transform::{
    fold_service_times, generate_wlql_weights, make_ktrp, wrrp_transform, FoldDirection, RigClient,
};
