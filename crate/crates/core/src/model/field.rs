use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Rank-2 complex hypermatrix of shape 3×N, indexed `[phase][node]`.
/// Holds nodal voltages `v_jm` or currents `i_ik`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseField {
    n_nodes: usize,
    values: Vec<Complex64>,
}

impl PhaseField {
    pub fn zeros(n_nodes: usize) -> Self {
        PhaseField {
            n_nodes,
            values: vec![Complex64::new(0.0, 0.0); 3 * n_nodes],
        }
    }

    pub fn from_fn(n_nodes: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut values = Vec::with_capacity(3 * n_nodes);
        for phase in 0..3 {
            for node in 0..n_nodes {
                values.push(f(phase, node));
            }
        }
        PhaseField { n_nodes, values }
    }

    /// Same three-phase value at every node.
    pub fn uniform(n_nodes: usize, per_phase: [Complex64; 3]) -> Self {
        Self::from_fn(n_nodes, |phase, _| per_phase[phase])
    }

    pub fn from_rows(rows: [Vec<Complex64>; 3]) -> Result<Self> {
        let n_nodes = rows[0].len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n_nodes) {
            return Err(Error::ShapeMismatch {
                expected: n_nodes,
                found: bad.len(),
            });
        }
        Ok(PhaseField {
            n_nodes,
            values: rows.concat(),
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn phase(&self, phase: usize) -> &[Complex64] {
        &self.values[phase * self.n_nodes..(phase + 1) * self.n_nodes]
    }

    pub fn node(&self, node: usize) -> [Complex64; 3] {
        [self[(0, node)], self[(1, node)], self[(2, node)]]
    }

    pub fn set_node(&mut self, node: usize, values: [Complex64; 3]) {
        for (phase, x) in values.into_iter().enumerate() {
            self[(phase, node)] = x;
        }
    }

    /// Values in `[phase][node]` order.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &PhaseField) -> f64 {
        debug_assert_eq!(self.n_nodes, other.n_nodes);
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn check_nodes(&self, expected: usize) -> Result<()> {
        if self.n_nodes == expected {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                expected,
                found: self.n_nodes,
            })
        }
    }
}

impl Index<(usize, usize)> for PhaseField {
    type Output = Complex64;

    fn index(&self, (phase, node): (usize, usize)) -> &Complex64 {
        assert!(phase < 3 && node < self.n_nodes, "index out of bounds");
        &self.values[phase * self.n_nodes + node]
    }
}

impl IndexMut<(usize, usize)> for PhaseField {
    fn index_mut(&mut self, (phase, node): (usize, usize)) -> &mut Complex64 {
        assert!(phase < 3 && node < self.n_nodes, "index out of bounds");
        &mut self.values[phase * self.n_nodes + node]
    }
}
