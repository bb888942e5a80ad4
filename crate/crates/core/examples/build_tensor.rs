//! Assembles the rank-4 admittance tensor of a 4-node feeder and inspects
//! symmetry, row sums and diagonal dominance.

use gridflow::admittance::{build, check_diagonal_dominance, check_minor_symmetry};
use gridflow::bench::{generate_radial, Coupling};

fn main() -> gridflow::Result<()> {
    let feeder = generate_radial(4, 1, Coupling::Full);
    let y = build(&feeder)?;

    println!("non-zero entries: {} of {}", y.nonzero_count(), 9 * 16);
    println!("block (0, 0):");
    let b = y.block(0, 0);
    for r in 0..3 {
        println!("  {:.3} {:.3} {:.3}", b[(r, 0)], b[(r, 1)], b[(r, 2)]);
    }
    println!("minor symmetry defect: {:e}", check_minor_symmetry(&y));

    let report = check_diagonal_dominance(&y);
    println!("largest row sum: {:e}", report.max_row_sum());
    println!(
        "rows failing |y_iikk| >= sum |off-diagonal|: {} of {}",
        report.classical_violations(),
        report.rows.len()
    );
    Ok(())
}
