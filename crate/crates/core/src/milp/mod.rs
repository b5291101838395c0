//! Variables of the multi-commodity flow formulation, a row-by-row checker
//! for integer assignments and the objective evaluated from the variables.

mod dump;
mod variables;
mod verify;

pub use dump::{parse_point, write_point, PointFile};
pub use variables::{
    assignment_from_solution, decode_assignment, f_in_domain, s_in_domain, z_in_domain, Family,
    FractionalPoint, VariableAssignment, Variables,
};
pub use verify::{objective_from_assignment, verify_constraints, ConstraintId, Row};
