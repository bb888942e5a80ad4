//! Synthetic radial feeders and the sparse-versus-dense product benchmark.

use std::fmt;
use std::hint::black_box;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::admittance::build;
use crate::error::{Error, Result};
use crate::model::{Branch, FeederModel, Load, Matrix3, PhaseField};
use crate::sparse::{apply_sparse, compress, memory_positions, MemberShapes, SparseAdmittance};

/// Typical self impedance of one line section, per-unit.
const SELF_Z: Complex64 = Complex64::new(0.01, 0.04);
const MUTUAL_RATIO: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Coupling {
    /// Dense symmetric 3×3 impedances with mutual terms.
    #[default]
    Full,
    /// No mutual terms between phases.
    Diagonal,
}

impl std::str::FromStr for Coupling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Coupling::Full),
            "diagonal" => Ok(Coupling::Diagonal),
            other => Err(Error::Config(format!("unknown coupling `{other}`"))),
        }
    }
}

fn jitter(rng: &mut ChaCha8Rng, spread: f64) -> f64 {
    1.0 + rng.random_range(-spread..=spread)
}

/// Symmetric impedance with mutual terms only between the listed phase pairs.
fn line_impedance(rng: &mut ChaCha8Rng, coupled: &[(usize, usize)]) -> Matrix3 {
    let length = rng.random_range(0.5..=1.5);
    let mut z = Matrix3::zeros();
    for p in 0..3 {
        z[(p, p)] = SELF_Z * length * jitter(rng, 0.1);
    }
    for &(a, b) in coupled {
        let mutual = SELF_Z * (MUTUAL_RATIO * length * jitter(rng, 0.1));
        z[(a, b)] = mutual;
        z[(b, a)] = mutual;
    }
    z
}

const ALL_PAIRS: [(usize, usize); 3] = [(0, 1), (1, 2), (0, 2)];

fn light_load(rng: &mut ChaCha8Rng) -> [Complex64; 3] {
    std::array::from_fn(|_| {
        let p = rng.random_range(0.002..=0.008);
        Complex64::new(p, p * rng.random_range(0.3..=0.5))
    })
}

fn leaves(f: &FeederModel) -> Vec<usize> {
    let mut degree = vec![0usize; f.n_nodes];
    for br in &f.branches {
        degree[br.from.index()] += 1;
        degree[br.to.index()] += 1;
    }
    (0..f.n_nodes)
        .filter(|&k| k != f.slack.index() && degree[k] == 1)
        .collect()
}

/// Random radial tree rooted at slack node 0, each node hanging off a
/// uniformly chosen earlier node. Branches are symmetric with self terms near
/// `0.01 + j0.04` p.u. and, for [`Coupling::Full`], mutuals near 30 % of self.
/// No shunts. Every leaf gets a light wye load (`|s| ≤ 0.01` p.u. per phase).
pub fn generate_radial(n_nodes: usize, seed: u64, coupling: Coupling) -> FeederModel {
    assert!(n_nodes >= 2, "a feeder needs at least 2 nodes");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coupled: &[(usize, usize)] = match coupling {
        Coupling::Full => &ALL_PAIRS,
        Coupling::Diagonal => &[],
    };
    let mut f = FeederModel::new(n_nodes, 0);
    for k in 1..n_nodes {
        let parent = rng.random_range(0..k);
        f.branches
            .push(Branch::series(parent, k, line_impedance(&mut rng, coupled)));
    }
    for k in leaves(&f) {
        f.loads.push(Load::wye(k, light_load(&mut rng)));
    }
    f
}

/// Number of hyper-nodes of [`ieee123_like`].
pub const IEEE123_LIKE_NODES: usize = 119;
/// Off-diagonal non-zeros of the tensor built from [`ieee123_like`].
pub const IEEE123_LIKE_NNZ: usize = 1586;

/// A 119-node radial feeder whose admittance tensor has exactly 1586
/// off-diagonal non-zeros, the size class of the IEEE 123-node test feeder.
///
/// Layout: nodes `0..=40` form a fully coupled subtree (40 branches), 19
/// isolated branches couple a single phase pair (5 non-zeros per mutual
/// block, 2 off-phase entries at each end), and the remaining 59 branches are
/// uncoupled. Count: `18·40 + 6·41 + 10·19 + 2·38 + 6·59 = 1586`.
pub fn ieee123_like(seed: u64) -> FeederModel {
    const FULL_NODES: usize = 41;
    const PAIR_BRANCHES: usize = 19;
    let n = IEEE123_LIKE_NODES;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = FeederModel::new(n, 0);

    for k in 1..FULL_NODES {
        let parent = rng.random_range(0..k);
        f.branches.push(Branch::series(
            parent,
            k,
            line_impedance(&mut rng, &ALL_PAIRS),
        ));
    }
    for t in 0..PAIR_BRANCHES {
        let u = FULL_NODES + 2 * t;
        let parent = rng.random_range(0..u);
        f.branches
            .push(Branch::series(parent, u, line_impedance(&mut rng, &[])));
        let pair = ALL_PAIRS[rng.random_range(0..3)];
        f.branches
            .push(Branch::series(u, u + 1, line_impedance(&mut rng, &[pair])));
    }
    for k in (FULL_NODES + 2 * PAIR_BRANCHES)..n {
        let parent = rng.random_range(0..k);
        f.branches
            .push(Branch::series(parent, k, line_impedance(&mut rng, &[])));
    }
    for (idx, k) in leaves(&f).into_iter().enumerate() {
        let s = light_load(&mut rng);
        if idx % 5 == 4 {
            f.loads.push(Load::delta(k, s));
        } else {
            f.loads.push(Load::wye(k, s));
        }
    }
    f
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BenchConfig {
    pub n_nodes: usize,
    pub trials: usize,
    pub seed: u64,
    pub coupling: Coupling,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            n_nodes: IEEE123_LIKE_NODES,
            trials: 50,
            seed: 7,
            coupling: Coupling::Full,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub n_nodes: usize,
    pub trials: usize,
    pub nnz: usize,
    /// Median seconds of the flat 3N×3N matrix-vector product.
    pub t_dense_matvec: f64,
    /// Median seconds of the sparse tensor contraction.
    pub t_sparse_apply: f64,
    pub speedup: f64,
    /// `9N²`
    pub mem_dense: usize,
    /// `3P + 9N`
    pub mem_sparse: usize,
    pub mem_ratio: f64,
    pub shapes: MemberShapes,
}

/// Row-major `3N×3N` times a vector stacked as `3·node + phase`.
pub fn dense_matvec(flat: &[Complex64], x: &[Complex64], out: &mut [Complex64]) {
    let dim = x.len();
    for (row, o) in flat.chunks_exact(dim).zip(out.iter_mut()) {
        *o = row.iter().zip(x).map(|(a, b)| a * b).sum();
    }
}

/// Stacks a field as `3·node + phase`.
pub fn stack_field(v: &PhaseField) -> Vec<Complex64> {
    (0..v.n_nodes()).flat_map(|k| v.node(k)).collect()
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let mid = xs.len() / 2;
    if xs.len().is_multiple_of(2) {
        0.5 * (xs[mid - 1] + xs[mid])
    } else {
        xs[mid]
    }
}

/// Times `trials` runs of each product on one random voltage field, after a
/// discarded warm-up run. Every run is checked: sparse and dense results must
/// agree to `1e-12` relative, otherwise the benchmark aborts.
pub fn benchmark_feeder(f: &FeederModel, trials: usize, seed: u64) -> Result<BenchReport> {
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let n = f.n_nodes;
    let dense = build(f)?;
    let flat = dense.to_flat();
    let sparse: SparseAdmittance = compress(&dense, 0.0);

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0ff1_e1d0);
    let v = PhaseField::from_fn(n, |_, _| {
        Complex64::from_polar(rng.random_range(0.9..=1.1), rng.random_range(-3.1..=3.1))
    });
    let x = stack_field(&v);
    let mut out = vec![Complex64::new(0.0, 0.0); 3 * n];

    let mut t_dense = Vec::with_capacity(trials);
    let mut t_sparse = Vec::with_capacity(trials);
    for trial in 0..=trials {
        let start = Instant::now();
        dense_matvec(black_box(&flat), black_box(&x), &mut out);
        let dense_secs = start.elapsed().as_secs_f64();
        black_box(&out);

        let start = Instant::now();
        let i = apply_sparse(black_box(&sparse), black_box(&v))?;
        let sparse_secs = start.elapsed().as_secs_f64();

        let scale = out
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let mismatch = stack_field(&i)
            .iter()
            .zip(&out)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if mismatch > 1e-12 * scale {
            return Err(Error::CorruptStructure(format!(
                "sparse and dense products disagree by {mismatch:e} on trial {trial}"
            )));
        }
        if trial > 0 {
            t_dense.push(dense_secs);
            t_sparse.push(sparse_secs);
        }
    }

    // clock granularity can round a tiny kernel down to zero
    let t_dense_matvec = median(t_dense).max(1e-9);
    let t_sparse_apply = median(t_sparse).max(1e-9);
    let mem_dense = 9 * n * n;
    let mem_sparse = memory_positions(&sparse);
    Ok(BenchReport {
        n_nodes: n,
        trials,
        nnz: sparse.nnz(),
        t_dense_matvec,
        t_sparse_apply,
        speedup: t_dense_matvec / t_sparse_apply,
        mem_dense,
        mem_sparse,
        mem_ratio: mem_sparse as f64 / mem_dense as f64,
        shapes: sparse.shapes(),
    })
}

pub fn run_benchmark(cfg: &BenchConfig) -> Result<BenchReport> {
    if cfg.n_nodes < 2 {
        return Err(Error::Config("n_nodes must be at least 2".into()));
    }
    let f = generate_radial(cfg.n_nodes, cfg.seed, cfg.coupling);
    benchmark_feeder(&f, cfg.trials, cfg.seed)
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n_nodes;
        let dim = 3 * n;
        writeln!(
            f,
            "{:<20} {:>18} {:>18}",
            "parameter", "Y_BUS (matrix)", "y_ijkm (sparse)"
        )?;
        writeln!(
            f,
            "{:<20} {:>18.6e} {:>18.6e}",
            "elapsed time [s]", self.t_dense_matvec, self.t_sparse_apply
        )?;
        writeln!(
            f,
            "{:<20} {:>18} {:>18}",
            "array size",
            format!("{dim}x{dim}"),
            format!("3x3x{n}x{n}")
        )?;
        writeln!(
            f,
            "{:<20} {:>18} {:>18}",
            "memory positions", self.mem_dense, self.mem_sparse
        )?;
        writeln!(f, "{:<20} {:>18.1}x", "speedup", self.speedup)?;
        writeln!(
            f,
            "{:<20} {:>17.2}%",
            "memory ratio",
            100.0 * self.mem_ratio
        )?;
        writeln!(f)?;
        writeln!(f, "{:<8} {:>12}", "member", "size")?;
        let s = &self.shapes;
        for (name, (r, c)) in [("M", s.m), ("D", s.d), ("F", s.f), ("C", s.c), ("E", s.e)] {
            writeln!(f, "{:<8} {:>12}", name, format!("{r}x{c}"))?;
        }
        Ok(())
    }
}
