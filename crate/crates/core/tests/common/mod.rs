//! Test oracles, written independently of the crate's kernels: textbook
//! Y_BUS stamping with Gauss-Jordan inversion, a Newton-Raphson load flow on
//! the flat matrix, and branch-wise loss accounting.

#![allow(dead_code, clippy::needless_range_loop)]

use gridflow::model::{Branch, Connection, FeederModel, Load, Matrix3, PhaseField};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Debug, Clone, Copy)]
pub struct RandomFeeder {
    pub n_nodes: usize,
    /// Extra non-tree branches.
    pub mesh_edges: usize,
    pub symmetric: bool,
    pub shunts: bool,
    /// Upper bound on |s| per phase or leg.
    pub load_scale: f64,
    pub delta_loads: bool,
}

impl RandomFeeder {
    pub fn radial(n_nodes: usize) -> Self {
        RandomFeeder {
            n_nodes,
            mesh_edges: 0,
            symmetric: true,
            shunts: false,
            load_scale: 0.01,
            delta_loads: true,
        }
    }
}

fn random_z(rng: &mut ChaCha8Rng, symmetric: bool) -> Matrix3 {
    let mut z = Matrix3::zeros();
    for p in 0..3 {
        z[(p, p)] = c(rng.random_range(0.005..0.05), rng.random_range(0.02..0.2));
    }
    let scale = z[(0, 0)].norm();
    for r in 0..3 {
        for col in (r + 1)..3 {
            let m = c(rng.random_range(0.0..0.3), rng.random_range(0.0..0.3)) * scale;
            z[(r, col)] = m;
            z[(col, r)] = if symmetric {
                m
            } else {
                m * rng.random_range(0.5..1.5)
            };
        }
    }
    z
}

fn random_shunt(rng: &mut ChaCha8Rng) -> Matrix3 {
    let mut b = Matrix3::zeros();
    for r in 0..3 {
        b[(r, r)] = c(0.0, rng.random_range(1e-4..1e-3));
        for col in (r + 1)..3 {
            let m = c(0.0, -rng.random_range(0.0..1e-4));
            b[(r, col)] = m;
            b[(col, r)] = m;
        }
    }
    b
}

pub fn random_feeder(seed: u64, cfg: RandomFeeder) -> FeederModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = cfg.n_nodes;
    let slack = rng.random_range(0..n);
    let mut f = FeederModel::new(n, slack);
    // random labelling with the slack as the tree root
    let mut order: Vec<usize> = (0..n).filter(|&k| k != slack).collect();
    order.shuffle(&mut rng);
    order.insert(0, slack);
    let mut pairs = std::collections::HashSet::new();
    let mut add = |f: &mut FeederModel, rng: &mut ChaCha8Rng, a: usize, b: usize| {
        if a == b || !pairs.insert((a.min(b), a.max(b))) {
            return;
        }
        let mut br = Branch::series(a, b, random_z(rng, cfg.symmetric));
        if cfg.shunts {
            br.b_from = random_shunt(rng);
            br.b_to = random_shunt(rng);
        }
        f.branches.push(br);
    };
    for idx in 1..n {
        let parent = order[rng.random_range(0..idx)];
        add(&mut f, &mut rng, parent, order[idx]);
    }
    for _ in 0..cfg.mesh_edges {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        add(&mut f, &mut rng, a, b);
    }
    if cfg.load_scale > 0.0 {
        for k in (0..n).filter(|&k| k != slack) {
            if rng.random_bool(0.3) {
                continue;
            }
            let s: [Complex64; 3] = std::array::from_fn(|_| {
                let p = rng.random_range(0.0..cfg.load_scale * 0.8);
                c(p, p * rng.random_range(0.0..0.6))
            });
            if cfg.delta_loads && rng.random_bool(0.3) {
                f.loads.push(Load::delta(k, s));
            } else {
                f.loads.push(Load::wye(k, s));
            }
        }
    }
    f
}

pub fn random_field(seed: u64, n: usize) -> PhaseField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PhaseField::from_fn(n, |_, _| {
        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

/// Gauss-Jordan inverse with partial pivoting, any size.
pub fn gauss_jordan_inverse(a: &[Vec<Complex64>]) -> Option<Vec<Vec<Complex64>>> {
    let n = a.len();
    let mut aug: Vec<Vec<Complex64>> = a
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut out = row.clone();
            out.extend((0..n).map(|col| if col == r { c(1.0, 0.0) } else { ZERO }));
            out
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| aug[x][col].norm().total_cmp(&aug[y][col].norm()))?;
        if aug[pivot][col].norm() == 0.0 {
            return None;
        }
        aug.swap(col, pivot);
        let inv = aug[col][col].inv();
        for x in aug[col].iter_mut() {
            *x *= inv;
        }
        for r in 0..n {
            if r != col {
                let factor = aug[r][col];
                if factor != ZERO {
                    for k in 0..2 * n {
                        let delta = factor * aug[col][k];
                        aug[r][k] -= delta;
                    }
                }
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

fn inverse3(m: &Matrix3) -> Vec<Vec<Complex64>> {
    let rows: Vec<Vec<Complex64>> = m.0.iter().map(|r| r.to_vec()).collect();
    gauss_jordan_inverse(&rows).expect("invertible")
}

/// Textbook stamping of the 3N×3N bus admittance matrix, index `3·node + phase`.
pub fn ybus_stamp(f: &FeederModel) -> Vec<Vec<Complex64>> {
    let dim = 3 * f.n_nodes;
    let mut y = vec![vec![ZERO; dim]; dim];
    for br in &f.branches {
        let g = inverse3(&br.z);
        let (a, b) = (br.from.index(), br.to.index());
        for p in 0..3 {
            for q in 0..3 {
                y[3 * a + p][3 * a + q] += g[p][q] + br.b_from[(p, q)];
                y[3 * b + p][3 * b + q] += g[p][q] + br.b_to[(p, q)];
                y[3 * a + p][3 * b + q] -= g[p][q];
                y[3 * b + p][3 * a + q] -= g[p][q];
            }
        }
    }
    y
}

pub fn stack(v: &PhaseField) -> Vec<Complex64> {
    (0..v.n_nodes())
        .flat_map(|k| (0..3).map(move |p| (p, k)))
        .map(|(p, k)| v[(p, k)])
        .collect()
}

pub fn unstack(x: &[Complex64]) -> PhaseField {
    PhaseField::from_fn(x.len() / 3, |p, k| x[3 * k + p])
}

pub fn matvec(y: &[Vec<Complex64>], x: &[Complex64]) -> Vec<Complex64> {
    y.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

/// Current drawn by one load at node voltages `vn` (own implementation).
pub fn drawn_current(load: &Load, vn: [Complex64; 3]) -> [Complex64; 3] {
    match load.connection {
        Connection::Wye => std::array::from_fn(|p| (load.s[p] / vn[p]).conj()),
        Connection::Delta => {
            let vab = vn[0] - vn[1];
            let vbc = vn[1] - vn[2];
            let vca = vn[2] - vn[0];
            let iab = (load.s[0] / vab).conj();
            let ibc = (load.s[1] / vbc).conj();
            let ica = (load.s[2] / vca).conj();
            [iab - ica, ibc - iab, ica - ibc]
        }
    }
}

/// Mismatch `Y v + Σ drawn` at every non-slack row, stacked.
fn mismatch(f: &FeederModel, y: &[Vec<Complex64>], x: &[Complex64]) -> Vec<Complex64> {
    let mut r = matvec(y, x);
    for load in &f.loads {
        let k = load.node.index();
        let drawn = drawn_current(load, [x[3 * k], x[3 * k + 1], x[3 * k + 2]]);
        for p in 0..3 {
            r[3 * k + p] += drawn[p];
        }
    }
    let slack = f.slack.index();
    r.into_iter()
        .enumerate()
        .filter(|(idx, _)| idx / 3 != slack)
        .map(|(_, v)| v)
        .collect()
}

fn solve_real(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in (col + 1)..n {
            let factor = a[r][col] / a[col][col];
            if factor != 0.0 {
                for k in col..n {
                    a[r][k] -= factor * a[col][k];
                }
                b[r] -= factor * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let tail: f64 = ((r + 1)..n).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - tail) / a[r][r];
    }
    Some(x)
}

/// Newton-Raphson on the real and imaginary parts of every non-slack voltage,
/// with a central-difference Jacobian. Starts flat. Returns `None` if it does
/// not reach `‖mismatch‖∞ ≤ 1e-13` within 50 steps or leaves the high-voltage
/// region.
pub fn newton_solve(f: &FeederModel) -> Option<PhaseField> {
    let y = ybus_stamp(f);
    let slack = f.slack.index();
    let mut x: Vec<Complex64> = (0..f.n_nodes).flat_map(|_| f.slack_voltage).collect();
    let unknowns: Vec<usize> = (0..3 * f.n_nodes).filter(|idx| idx / 3 != slack).collect();
    let n = unknowns.len();
    for _ in 0..50 {
        let r = mismatch(f, &y, &x);
        let norm = r.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !norm.is_finite() {
            return None;
        }
        if norm <= 1e-13 {
            let v = unstack(&x);
            let low = v.as_slice().iter().any(|z| z.norm() < 0.5);
            return if low { None } else { Some(v) };
        }
        let h = 1e-7;
        let mut jac = vec![vec![0.0; 2 * n]; 2 * n];
        for (col, &idx) in unknowns.iter().enumerate() {
            for (part, dir) in [(0, c(h, 0.0)), (1, c(0.0, h))] {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[idx] += dir;
                xm[idx] -= dir;
                let rp = mismatch(f, &y, &xp);
                let rm = mismatch(f, &y, &xm);
                for row in 0..n {
                    let d = (rp[row] - rm[row]) / (2.0 * h);
                    jac[2 * row][2 * col + part] = d.re;
                    jac[2 * row + 1][2 * col + part] = d.im;
                }
            }
        }
        let rhs: Vec<f64> = r.iter().flat_map(|z| [-z.re, -z.im]).collect();
        let dx = solve_real(jac, rhs)?;
        for (col, &idx) in unknowns.iter().enumerate() {
            x[idx] += c(dx[2 * col], dx[2 * col + 1]);
        }
    }
    None
}

/// Power entering each branch from both ends, summed.
pub fn branch_losses(f: &FeederModel, v: &PhaseField) -> Complex64 {
    let mut total = ZERO;
    for br in &f.branches {
        let g = inverse3(&br.z);
        let (a, b) = (br.from.index(), br.to.index());
        let va = v.node(a);
        let vb = v.node(b);
        for p in 0..3 {
            let series: Complex64 = (0..3).map(|q| g[p][q] * (va[q] - vb[q])).sum();
            let ia = series + (0..3).map(|q| br.b_from[(p, q)] * va[q]).sum::<Complex64>();
            let ib = -series + (0..3).map(|q| br.b_to[(p, q)] * vb[q]).sum::<Complex64>();
            total += va[p] * ia.conj() + vb[p] * ib.conj();
        }
    }
    total
}

/// Power injected at the slack, computed from the stamped matrix.
pub fn slack_injection(f: &FeederModel, v: &PhaseField) -> Complex64 {
    let i = matvec(&ybus_stamp(f), &stack(v));
    let k = f.slack.index();
    (0..3).map(|p| v[(p, k)] * i[3 * k + p].conj()).sum()
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
