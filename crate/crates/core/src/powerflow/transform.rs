use crate::model::PhaseField;

/// Phase-to-neutral → line-to-line basis change, `m_ij = ∂v'_i / ∂v_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformM {
    pub m: [[f64; 3]; 3],
}

impl TransformM {
    pub const WYE_TO_DELTA: TransformM = TransformM {
        m: [[1.0, -1.0, 0.0], [0.0, 1.0, -1.0], [-1.0, 0.0, 1.0]],
    };
}

impl Default for TransformM {
    fn default() -> Self {
        Self::WYE_TO_DELTA
    }
}

/// `v'[r][m] = Σ_c m[r][c] · v[c][m]`: ab, bc and ca voltages per node.
pub fn line_to_line_voltages(v: &PhaseField) -> PhaseField {
    let m = TransformM::WYE_TO_DELTA.m;
    PhaseField::from_fn(v.n_nodes(), |r, node| {
        (0..3).map(|c| m[r][c] * v[(c, node)]).sum()
    })
}

/// Line currents from currents inside a delta: `i[j][m] = Σ_r m[r][j] · i'[r][m]`.
pub fn delta_to_line_currents(i_delta: &PhaseField) -> PhaseField {
    let m = TransformM::WYE_TO_DELTA.m;
    PhaseField::from_fn(i_delta.n_nodes(), |j, node| {
        (0..3).map(|r| m[r][j] * i_delta[(r, node)]).sum()
    })
}
