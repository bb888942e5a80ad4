//! Compressed storage `{D, F, M, C, E}` for the admittance hypermatrix.
//!
//! The tensor is split as `y = D + F`. `D[i][k] = y_iikk` keeps the scalar
//! diagonal; every other non-zero goes to `F` with its column coordinates
//! `(j, m)` in `M`. Each `(i, k)` pair is one row; `F[C[i][k]..E[i][k]]` are
//! that row's entries (`E` is exclusive). Rows are laid out node-major, then
//! phase, and within a row columns run node-major, then phase.

use std::collections::HashSet;

use num_complex::Complex64;
use serde::Serialize;

use crate::admittance::DenseAdmittance;
use crate::error::{Error, Result};
use crate::model::{pair, Pair, PhaseField};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct SparseAdmittance {
    n_nodes: usize,
    /// `D`, 3×N in `[i][k]` order.
    diag: Vec<Complex64>,
    /// `F`
    values: Vec<Complex64>,
    /// `M`, `(j, m)` for each entry of `F`.
    coords: Vec<[usize; 2]>,
    /// `C`, 3×N.
    row_start: Vec<usize>,
    /// `E`, 3×N, exclusive.
    row_end: Vec<usize>,
}

/// `(rows, cols)` of each member, counting a complex number as one position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MemberShapes {
    #[serde(rename = "M")]
    pub m: (usize, usize),
    #[serde(rename = "D")]
    pub d: (usize, usize),
    #[serde(rename = "F")]
    pub f: (usize, usize),
    #[serde(rename = "C")]
    pub c: (usize, usize),
    #[serde(rename = "E")]
    pub e: (usize, usize),
}

impl SparseAdmittance {
    /// Assembles the structure from raw members. `diag`, `row_start` and
    /// `row_end` are 3×N in `[i][k]` order. Shapes, index bounds, and the row
    /// partition of `[0, P)` are checked here; per-row duplicates are only
    /// detected by [`decompress`].
    pub fn from_parts(
        n_nodes: usize,
        diag: Vec<Complex64>,
        values: Vec<Complex64>,
        coords: Vec<[usize; 2]>,
        row_start: Vec<usize>,
        row_end: Vec<usize>,
    ) -> Result<Self> {
        let rows = 3 * n_nodes;
        let corrupt = |msg: String| Err(Error::CorruptStructure(msg));
        if diag.len() != rows || row_start.len() != rows || row_end.len() != rows {
            return corrupt(format!("D, C and E must hold 3×{n_nodes} entries"));
        }
        if values.len() != coords.len() {
            return corrupt(format!(
                "F has {} entries but M has {}",
                values.len(),
                coords.len()
            ));
        }
        if let Some(p) = coords.iter().position(|&[j, m]| j >= 3 || m >= n_nodes) {
            return corrupt(format!("M[{p}] = {:?} is out of range", coords[p]));
        }
        let p_total = values.len();
        let mut ranges: Vec<(usize, usize)> = row_start
            .iter()
            .copied()
            .zip(row_end.iter().copied())
            .collect();
        if let Some(r) = ranges.iter().position(|&(c, e)| c > e || e > p_total) {
            return corrupt(format!("row {r} has invalid range {:?}", ranges[r]));
        }
        ranges.sort_unstable();
        let mut cursor = 0;
        for (c, e) in ranges.into_iter().filter(|(c, e)| c < e) {
            if c != cursor {
                return corrupt(format!("row ranges leave a gap or overlap at {cursor}"));
            }
            cursor = e;
        }
        if cursor != p_total {
            return corrupt(format!("row ranges cover {cursor} of {p_total} entries"));
        }
        Ok(SparseAdmittance {
            n_nodes,
            diag,
            values,
            coords,
            row_start,
            row_end,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    /// Number of stored off-diagonal entries.
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    #[inline]
    fn row_index(&self, i: usize, k: usize) -> usize {
        i * self.n_nodes + k
    }

    pub fn diagonal(&self, i: usize, k: usize) -> Complex64 {
        self.diag[self.row_index(i, k)]
    }

    pub fn d(&self) -> &[Complex64] {
        &self.diag
    }

    pub fn f(&self) -> &[Complex64] {
        &self.values
    }

    pub fn m(&self) -> &[[usize; 2]] {
        &self.coords
    }

    pub fn c(&self) -> &[usize] {
        &self.row_start
    }

    pub fn e(&self) -> &[usize] {
        &self.row_end
    }

    /// `(j, m, value)` for each stored off-diagonal entry of row `(i, k)`.
    pub fn row(&self, i: usize, k: usize) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        let r = self.row_index(i, k);
        (self.row_start[r]..self.row_end[r]).map(|p| {
            let [j, m] = self.coords[p];
            (j, m, self.values[p])
        })
    }

    pub fn shapes(&self) -> MemberShapes {
        let p = self.nnz();
        let n = self.n_nodes;
        MemberShapes {
            m: (p, 2),
            d: (3, n),
            f: (1, p),
            c: (3, n),
            e: (3, n),
        }
    }

    /// Applies only the off-diagonal part `F`: `Σ_{(j,m)≠(i,k)} y_ijkm v_jm`.
    pub fn apply_off_diagonal(&self, v: &PhaseField) -> Result<PhaseField> {
        v.check_nodes(self.n_nodes)?;
        let mut out = PhaseField::zeros(self.n_nodes);
        for i in 0..3 {
            for k in 0..self.n_nodes {
                out[(i, k)] = self.row_product(i, k, v);
            }
        }
        Ok(out)
    }

    #[inline]
    fn row_product(&self, i: usize, k: usize, v: &PhaseField) -> Complex64 {
        let r = self.row_index(i, k);
        let (start, end) = (self.row_start[r], self.row_end[r]);
        self.values[start..end]
            .iter()
            .zip(&self.coords[start..end])
            .fold(ZERO, |acc, (f, &[j, m])| acc + f * v[(j, m)])
    }

    pub fn to_json(&self) -> serde_json::Value {
        let grid = |xs: &[usize]| -> Vec<Vec<usize>> {
            xs.chunks(self.n_nodes).map(<[usize]>::to_vec).collect()
        };
        let d: Vec<Vec<Pair>> = self
            .diag
            .chunks(self.n_nodes)
            .map(|row| row.iter().copied().map(pair).collect())
            .collect();
        let f: Vec<Pair> = self.values.iter().copied().map(pair).collect();
        serde_json::json!({
            "n_nodes": self.n_nodes,
            "D": d,
            "F": f,
            "M": self.coords,
            "C": grid(&self.row_start),
            "E": grid(&self.row_end),
        })
    }
}

/// Splits `y` into its scalar diagonal and CSR-style off-diagonal entries.
/// Off-diagonal entries with `|y| <= drop_tol` are left out; with
/// `drop_tol = 0` only exact zeros are dropped.
pub fn compress(y: &DenseAdmittance, drop_tol: f64) -> SparseAdmittance {
    let n = y.n_nodes();
    let mut diag = vec![ZERO; 3 * n];
    let mut values = Vec::new();
    let mut coords = Vec::new();
    let mut row_start = vec![0; 3 * n];
    let mut row_end = vec![0; 3 * n];
    for k in 0..n {
        for i in 0..3 {
            let r = i * n + k;
            diag[r] = y.get(i, i, k, k);
            row_start[r] = values.len();
            for m in 0..n {
                for j in 0..3 {
                    if (j, m) == (i, k) {
                        continue;
                    }
                    let x = y.get(i, j, k, m);
                    if x.norm() > drop_tol {
                        values.push(x);
                        coords.push([j, m]);
                    }
                }
            }
            row_end[r] = values.len();
        }
    }
    SparseAdmittance {
        n_nodes: n,
        diag,
        values,
        coords,
        row_start,
        row_end,
    }
}

/// Sparse contraction `i_ik = y_ijkm v_jm`: for each row the diagonal term
/// `D[i][k]·v[i][k]`, then the row's `F` entries scattered through `M`.
pub fn apply_sparse(y: &SparseAdmittance, v: &PhaseField) -> Result<PhaseField> {
    v.check_nodes(y.n_nodes)?;
    let n = y.n_nodes;
    let mut out = PhaseField::zeros(n);
    for i in 0..3 {
        for k in 0..n {
            let mut acc = y.diag[i * n + k] * v[(i, k)];
            let r = i * n + k;
            for p in y.row_start[r]..y.row_end[r] {
                let [j, m] = y.coords[p];
                acc += y.values[p] * v[(j, m)];
            }
            out[(i, k)] = acc;
        }
    }
    Ok(out)
}

/// Scatters `D` and `F` back into a dense tensor.
pub fn decompress(y: &SparseAdmittance) -> Result<DenseAdmittance> {
    let n = y.n_nodes;
    let mut dense = DenseAdmittance::zeros(n);
    let mut seen = HashSet::new();
    for i in 0..3 {
        for k in 0..n {
            dense.set(i, i, k, k, y.diagonal(i, k));
            seen.clear();
            for (j, m, value) in y.row(i, k) {
                if (j, m) == (i, k) {
                    return Err(Error::CorruptStructure(format!(
                        "row ({i}, {k}) stores its own diagonal in F"
                    )));
                }
                if !seen.insert((j, m)) {
                    return Err(Error::CorruptStructure(format!(
                        "row ({i}, {k}) stores column ({j}, {m}) twice"
                    )));
                }
                dense.set(i, j, k, m, value);
            }
        }
    }
    Ok(dense)
}

/// Storage cost in positions: `2P` for `M`, `P` for `F`, and `3N` each for
/// `D`, `C` and `E`. A complex value counts as one position.
pub fn memory_positions(y: &SparseAdmittance) -> usize {
    3 * y.nnz() + 9 * y.n_nodes
}
