//! Wye/delta basis changes, constant-power load currents, the fixed-point
//! load flow, and total losses.

mod loads;
mod solver;
mod transform;

pub use loads::{load_injection, network_injections, MIN_VOLTAGE};
pub use solver::{
    compute_losses, fixed_point_step, solve, ImplicitStep, Iteration, SolveOptions, SolveReport,
    SolveStatus,
};
pub use transform::{delta_to_line_currents, line_to_line_voltages, TransformM};
