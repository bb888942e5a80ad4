//! Grid domain types: phases, hyper-nodes, π-model branches, loads, and the
//! 3×N phase fields that carry nodal voltages and currents.

mod feeder;
mod field;
mod json;
mod matrix3;

pub use feeder::{
    balanced_voltage, validate_feeder, Base, Branch, Connection, Diagnostic, FeederModel, Load,
    NodeId, Phase, Severity,
};
pub use field::PhaseField;
pub use json::{
    complex, field_to_json, pair, parse_feeder, parse_feeder_unchecked, serialize_feeder, Pair,
    FORMAT_VERSION,
};
pub use matrix3::Matrix3;
