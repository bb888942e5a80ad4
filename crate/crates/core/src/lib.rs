//! Three-phase unbalanced distribution grids as a rank-4 admittance
//! hypermatrix.
//!
//! A feeder with `N` hyper-nodes (each carrying phases a, b, c) is described
//! by [`model::FeederModel`]. [`admittance::build`] assembles the dense
//! 3×3×N×N tensor `y_ijkm` so that nodal currents follow from voltages by
//! `i_ik = y_ijkm v_jm`. [`sparse::compress`] stores it as the `{D, F, M, C, E}`
//! structure: the scalar diagonal plus CSR-style off-diagonal rows, which
//! [`sparse::apply_sparse`] contracts against a voltage field.
//! [`powerflow::solve`] runs a fixed-point load flow on top of it, and
//! [`bench`] compares the sparse contraction against the flat 3N×3N product.
//!
//! ```
//! use gridflow::{admittance, bench, powerflow, sparse};
//!
//! let feeder = bench::generate_radial(12, 1, bench::Coupling::Full);
//! let y = sparse::compress(&admittance::build(&feeder).unwrap(), 0.0);
//! let report = powerflow::solve(&y, &feeder, &Default::default()).unwrap();
//! assert!(report.converged);
//! assert!(report.losses.re >= 0.0);
//! ```

pub mod admittance;
pub mod bench;
pub mod error;
pub mod model;
pub mod powerflow;
pub mod sparse;

pub use error::{Error, Result};
