use num_complex::Complex64;

use super::transform::TransformM;
use crate::error::{Error, Result};
use crate::model::{Connection, FeederModel, Load, PhaseField};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Below this magnitude a loaded phase (or leg) is treated as collapsed.
pub const MIN_VOLTAGE: f64 = 1e-6;

/// Current drawn by a constant-power load, positive into the load.
///
/// Wye: `i_j = conj(s_j / v_j)`. Delta: `i'_leg = conj(s_leg / v'_leg)` on the
/// line-to-line voltages, mapped back to line currents. Unloaded phases draw
/// nothing and are not checked for undervoltage.
pub fn load_injection(load: &Load, v: &PhaseField) -> Result<[Complex64; 3]> {
    let node = load.node.index();
    let vn = v.node(node);
    let drawn = |s: Complex64, u: Complex64, phase: usize| -> Result<Complex64> {
        if s == ZERO {
            return Ok(ZERO);
        }
        if u.norm() < MIN_VOLTAGE {
            return Err(Error::Undervoltage {
                phase,
                node,
                magnitude: u.norm(),
            });
        }
        Ok((s / u).conj())
    };
    match load.connection {
        Connection::Wye => Ok([
            drawn(load.s[0], vn[0], 0)?,
            drawn(load.s[1], vn[1], 1)?,
            drawn(load.s[2], vn[2], 2)?,
        ]),
        Connection::Delta => {
            let m = TransformM::WYE_TO_DELTA.m;
            let vll: [Complex64; 3] =
                std::array::from_fn(|r| (0..3).map(|c| m[r][c] * vn[c]).sum());
            let legs = [
                drawn(load.s[0], vll[0], 0)?,
                drawn(load.s[1], vll[1], 1)?,
                drawn(load.s[2], vll[2], 2)?,
            ];
            Ok(std::array::from_fn(|j| {
                (0..3).map(|r| m[r][j] * legs[r]).sum()
            }))
        }
    }
}

/// Nodal current injected into the network by all loads (the negated drawn
/// current, summed per node).
pub fn network_injections(f: &FeederModel, v: &PhaseField) -> Result<PhaseField> {
    let mut out = PhaseField::zeros(f.n_nodes);
    for load in &f.loads {
        let drawn = load_injection(load, v)?;
        let node = load.node.index();
        for (phase, i) in drawn.into_iter().enumerate() {
            out[(phase, node)] -= i;
        }
    }
    Ok(out)
}
