use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense 3×3 complex matrix, row-major. Holds per-branch phase impedances and
/// admittances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix3(pub [[Complex64; 3]; 3]);

impl Default for Matrix3 {
    fn default() -> Self {
        Self::zeros()
    }
}

impl Matrix3 {
    pub const fn zeros() -> Self {
        Matrix3([[ZERO; 3]; 3])
    }

    pub const fn identity() -> Self {
        Matrix3([[ONE, ZERO, ZERO], [ZERO, ONE, ZERO], [ZERO, ZERO, ONE]])
    }

    pub fn from_diagonal(d: [Complex64; 3]) -> Self {
        let mut m = Self::zeros();
        for (p, value) in d.into_iter().enumerate() {
            m.0[p][p] = value;
        }
        m
    }

    /// Uniform self term on the diagonal and uniform mutual term elsewhere.
    pub fn self_mutual(self_term: Complex64, mutual: Complex64) -> Self {
        let mut m = Matrix3([[mutual; 3]; 3]);
        for p in 0..3 {
            m.0[p][p] = self_term;
        }
        m
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = *self;
        out.0.iter_mut().flatten().for_each(|x| *x *= factor);
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros();
        for r in 0..3 {
            for c in 0..3 {
                out.0[c][r] = self.0[r][c];
            }
        }
        out
    }

    pub fn determinant(&self) -> Complex64 {
        let a = &self.0;
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|x| x.norm())
            .fold(0.0, f64::max)
    }

    /// Determinant magnitude below which the matrix counts as singular:
    /// `1e-12 · max_abs³`. Scale-invariant under uniform scaling.
    pub fn singularity_threshold(&self) -> f64 {
        1e-12 * self.max_abs().powi(3)
    }

    pub fn is_singular(&self) -> bool {
        let det = self.determinant().norm();
        det.is_nan() || det <= self.singularity_threshold()
    }

    /// Largest `|m[r][c] - m[c][r]|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0_f64;
        for r in 0..3 {
            for c in (r + 1)..3 {
                worst = worst.max((self.0[r][c] - self.0[c][r]).norm());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|x| x.re.is_finite() && x.im.is_finite())
    }

    pub fn mul_vec(&self, v: &[Complex64; 3]) -> [Complex64; 3] {
        let a = &self.0;
        [
            a[0][0] * v[0] + a[0][1] * v[1] + a[0][2] * v[2],
            a[1][0] * v[0] + a[1][1] * v[1] + a[1][2] * v[2],
            a[2][0] * v[0] + a[2][1] * v[1] + a[2][2] * v[2],
        ]
    }
}

impl Index<(usize, usize)> for Matrix3 {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.0[r][c]
    }
}

impl IndexMut<(usize, usize)> for Matrix3 {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.0[r][c]
    }
}

impl Add for Matrix3 {
    type Output = Matrix3;

    fn add(mut self, rhs: Matrix3) -> Matrix3 {
        for r in 0..3 {
            for c in 0..3 {
                self.0[r][c] += rhs.0[r][c];
            }
        }
        self
    }
}

impl Sub for Matrix3 {
    type Output = Matrix3;

    fn sub(mut self, rhs: Matrix3) -> Matrix3 {
        for r in 0..3 {
            for c in 0..3 {
                self.0[r][c] -= rhs.0[r][c];
            }
        }
        self
    }
}

impl Neg for Matrix3 {
    type Output = Matrix3;

    fn neg(self) -> Matrix3 {
        self.scale(-ONE)
    }
}

impl Mul for Matrix3 {
    type Output = Matrix3;

    fn mul(self, rhs: Matrix3) -> Matrix3 {
        let mut out = Matrix3::zeros();
        for r in 0..3 {
            for c in 0..3 {
                out.0[r][c] = (0..3).map(|k| self.0[r][k] * rhs.0[k][c]).sum();
            }
        }
        out
    }
}
