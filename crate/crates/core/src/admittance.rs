//! Dense rank-4 admittance hypermatrix `y[i][j][k][m]` (phases `i, j`, nodes
//! `k, m`) relating nodal currents to voltages by `i_ik = y_ijkm v_jm`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{pair, FeederModel, Matrix3, Pair, PhaseField};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Inverts a 3×3 matrix through its adjugate.
pub fn invert3(z: &Matrix3) -> Result<Matrix3> {
    let det = z.determinant();
    let threshold = z.singularity_threshold();
    // NaN determinants count as singular
    if det.norm().partial_cmp(&threshold) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::SingularMatrix {
            det: det.norm(),
            threshold,
        });
    }
    let a = &z.0;
    let cof =
        |r0: usize, r1: usize, c0: usize, c1: usize| a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0];
    // adj[r][c] is the (c, r) cofactor
    let adj = Matrix3([
        [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
        [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
        [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
    ]);
    Ok(adj.scale(det.inv()))
}

/// Shape 3×3×N×N, stored contiguously in `[i][j][k][m]` order.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseAdmittance {
    n_nodes: usize,
    y: Vec<Complex64>,
}

impl DenseAdmittance {
    pub fn zeros(n_nodes: usize) -> Self {
        DenseAdmittance {
            n_nodes,
            y: vec![ZERO; 9 * n_nodes * n_nodes],
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    #[inline]
    fn offset(&self, i: usize, j: usize, k: usize, m: usize) -> usize {
        let n = self.n_nodes;
        assert!(i < 3 && j < 3 && k < n && m < n, "index out of bounds");
        ((i * 3 + j) * n + k) * n + m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, m: usize) -> Complex64 {
        self.y[self.offset(i, j, k, m)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, m: usize, value: Complex64) {
        let at = self.offset(i, j, k, m);
        self.y[at] = value;
    }

    /// The 3×3 phase block `y[:, :, k, m]`.
    pub fn block(&self, k: usize, m: usize) -> Matrix3 {
        let mut out = Matrix3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                out[(i, j)] = self.get(i, j, k, m);
            }
        }
        out
    }

    pub fn add_block(&mut self, k: usize, m: usize, block: &Matrix3) {
        for i in 0..3 {
            for j in 0..3 {
                let at = self.offset(i, j, k, m);
                self.y[at] += block[(i, j)];
            }
        }
    }

    /// Row-major 3N×3N matrix with flat index `3·node + phase` on both axes.
    pub fn to_flat(&self) -> Vec<Complex64> {
        let n3 = 3 * self.n_nodes;
        let mut flat = vec![ZERO; n3 * n3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..self.n_nodes {
                    for m in 0..self.n_nodes {
                        flat[(3 * k + i) * n3 + 3 * m + j] = self.get(i, j, k, m);
                    }
                }
            }
        }
        flat
    }

    pub fn nonzero_count(&self) -> usize {
        self.y.iter().filter(|x| **x != ZERO).count()
    }

    /// Nested 4-D `[i][j][k][m]` array of `[re, im]` pairs.
    pub fn to_json(&self) -> serde_json::Value {
        let n = self.n_nodes;
        let nested: Vec<Vec<Vec<Vec<Pair>>>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| {
                        (0..n)
                            .map(|k| (0..n).map(|m| pair(self.get(i, j, k, m))).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        serde_json::json!(nested)
    }
}

/// Assembles the admittance tensor branch by branch: `g = z⁻¹` goes onto the
/// two self blocks together with each end's shunt, `-g` onto both mutual
/// blocks.
pub fn build(f: &FeederModel) -> Result<DenseAdmittance> {
    let n = f.n_nodes;
    let mut y = DenseAdmittance::zeros(n);
    for (e, br) in f.branches.iter().enumerate() {
        let (nx, ny) = (br.from.index(), br.to.index());
        if nx >= n || ny >= n {
            return Err(Error::Semantic {
                path: format!("branches[{e}]"),
                message: format!("branch {e} references a node outside 0..{n}"),
            });
        }
        let g = invert3(&br.z).map_err(|err| match err {
            Error::SingularMatrix { det, .. } => Error::SingularImpedance { branch: e, det },
            other => other,
        })?;
        let neg_g = -g;
        y.add_block(nx, nx, &(g + br.b_from));
        y.add_block(nx, ny, &neg_g);
        y.add_block(ny, nx, &neg_g);
        y.add_block(ny, ny, &(g + br.b_to));
    }
    Ok(y)
}

/// Full contraction `i[i][k] = Σ_j Σ_m y[i][j][k][m] · v[j][m]`.
pub fn apply_dense(y: &DenseAdmittance, v: &PhaseField) -> Result<PhaseField> {
    v.check_nodes(y.n_nodes)?;
    let n = y.n_nodes;
    let mut out = PhaseField::zeros(n);
    for i in 0..3 {
        for k in 0..n {
            let mut acc = ZERO;
            for j in 0..3 {
                let row = &y.y[y.offset(i, j, k, 0)..][..n];
                for (m, yv) in row.iter().enumerate() {
                    acc += yv * v[(j, m)];
                }
            }
            out[(i, k)] = acc;
        }
    }
    Ok(out)
}

/// Largest deviation from `y_ijkm = y_jikm` and `y_ijkm = y_ijmk`.
pub fn check_minor_symmetry(y: &DenseAdmittance) -> f64 {
    let n = y.n_nodes;
    let mut worst = 0.0_f64;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..n {
                for m in 0..n {
                    let x = y.get(i, j, k, m);
                    worst = worst
                        .max((x - y.get(j, i, k, m)).norm())
                        .max((x - y.get(i, j, m, k)).norm());
                }
            }
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DominanceRow {
    pub phase: usize,
    pub node: usize,
    /// `|y_iikk|`
    pub diagonal: f64,
    /// `Σ_{(j,m) ≠ (i,k)} |y_ijkm|`
    pub off_diagonal_sum: f64,
    /// `|Σ_{j,m} y_ijkm|`, the contraction against a field of ones.
    pub row_sum: f64,
}

impl DominanceRow {
    pub fn classical_holds(&self) -> bool {
        self.diagonal >= self.off_diagonal_sum
    }

    pub fn row_sum_holds(&self) -> bool {
        self.diagonal >= self.row_sum
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceReport {
    pub rows: Vec<DominanceRow>,
}

impl DominanceReport {
    pub fn row(&self, phase: usize, node: usize) -> Option<&DominanceRow> {
        self.rows
            .iter()
            .find(|r| r.phase == phase && r.node == node)
    }

    pub fn max_row_sum(&self) -> f64 {
        self.rows.iter().map(|r| r.row_sum).fold(0.0, f64::max)
    }

    pub fn classical_violations(&self) -> usize {
        self.rows.iter().filter(|r| !r.classical_holds()).count()
    }

    pub fn row_sum_violations(&self) -> usize {
        self.rows.iter().filter(|r| !r.row_sum_holds()).count()
    }
}

/// Reports both readings of diagonal dominance per `(i, k)` row. Rows are
/// ordered node-major, then phase.
pub fn check_diagonal_dominance(y: &DenseAdmittance) -> DominanceReport {
    let n = y.n_nodes;
    let mut rows = Vec::with_capacity(3 * n);
    for k in 0..n {
        for i in 0..3 {
            let mut off = 0.0;
            let mut sum = ZERO;
            for j in 0..3 {
                for m in 0..n {
                    let x = y.get(i, j, k, m);
                    sum += x;
                    if (j, m) != (i, k) {
                        off += x.norm();
                    }
                }
            }
            rows.push(DominanceRow {
                phase: i,
                node: k,
                diagonal: y.get(i, i, k, k).norm(),
                off_diagonal_sum: off,
                row_sum: sum.norm(),
            });
        }
    }
    DominanceReport { rows }
}
