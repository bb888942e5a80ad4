//! Compresses the tensor into the D/F/M/C/E layout, walks one row and checks
//! the contraction against the dense tensor.

use gridflow::admittance::{apply_dense, build};
use gridflow::bench::ieee123_like;
use gridflow::model::{balanced_voltage, PhaseField};
use gridflow::sparse::{apply_sparse, compress, memory_positions};

fn main() -> gridflow::Result<()> {
    let feeder = ieee123_like(7);
    let dense = build(&feeder)?;
    let y = compress(&dense, 0.0);
    let n = feeder.n_nodes;

    let s = y.shapes();
    for (name, (rows, cols)) in [("M", s.m), ("D", s.d), ("F", s.f), ("C", s.c), ("E", s.e)] {
        println!("{name}: {rows}x{cols}");
    }
    println!(
        "memory positions: {} sparse, {} dense",
        memory_positions(&y),
        9 * n * n
    );

    println!("row (phase a, node 0): diagonal {:.3}", y.diagonal(0, 0));
    for (j, m, value) in y.row(0, 0) {
        println!("  j={j} m={m} {value:.3}");
    }

    let v = PhaseField::uniform(n, balanced_voltage());
    let diff = apply_sparse(&y, &v)?.max_abs_diff(&apply_dense(&dense, &v)?);
    println!("sparse vs dense contraction: {diff:e}");
    Ok(())
}
