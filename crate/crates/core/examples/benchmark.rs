//! Times the sparse contraction against the flat 3N×3N product for a few
//! feeder sizes. Build with `--release` for meaningful numbers.

use gridflow::bench::{run_benchmark, BenchConfig, Coupling};

fn main() -> gridflow::Result<()> {
    println!(
        "{:>6} {:>8} {:>12} {:>12} {:>8} {:>8}",
        "N", "P", "dense [s]", "sparse [s]", "speedup", "memory"
    );
    for n_nodes in [30, 60, 119, 240, 480] {
        let report = run_benchmark(&BenchConfig {
            n_nodes,
            trials: 20,
            seed: 7,
            coupling: Coupling::Full,
        })?;
        println!(
            "{:>6} {:>8} {:>12.3e} {:>12.3e} {:>7.1}x {:>7.2}%",
            n_nodes,
            report.nnz,
            report.t_dense_matvec,
            report.t_sparse_apply,
            report.speedup,
            100.0 * report.mem_ratio
        );
    }
    Ok(())
}
