//! Line-to-line voltages and the currents drawn by wye and delta loads on
//! an unbalanced feeder.

use gridflow::admittance::build;
use gridflow::model::{Branch, FeederModel, Load, Matrix3};
use gridflow::powerflow::{line_to_line_voltages, load_injection, solve, SolveOptions};
use gridflow::sparse::compress;
use num_complex::Complex64;

fn main() -> gridflow::Result<()> {
    let z = Matrix3::self_mutual(Complex64::new(0.01, 0.06), Complex64::new(0.003, 0.015));
    let delta = Load::delta(
        2,
        [
            Complex64::new(0.08, 0.03),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.02, 0.01),
        ],
    );
    let wye = Load::wye(
        1,
        [
            Complex64::new(0.03, 0.01),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ],
    );
    let feeder = FeederModel::new(3, 0)
        .with_branch(Branch::series(0, 1, z))
        .with_branch(Branch::series(1, 2, z))
        .with_load(wye.clone())
        .with_load(delta.clone());

    let report = solve(
        &compress(&build(&feeder)?, 0.0),
        &feeder,
        &SolveOptions::default(),
    )?;
    let v = &report.v;
    let vll = line_to_line_voltages(v);
    for k in 0..feeder.n_nodes {
        let ph: Vec<String> = (0..3).map(|p| format!("{:.4}", v[(p, k)].norm())).collect();
        let ll: Vec<String> = (0..3)
            .map(|p| format!("{:.4}", vll[(p, k)].norm()))
            .collect();
        println!("node {k}: |v| {}  |v_ll| {}", ph.join(" "), ll.join(" "));
    }

    for (label, load) in [("wye", &wye), ("delta", &delta)] {
        let drawn = load_injection(load, v)?;
        let total: Complex64 = drawn.iter().sum();
        let parts: Vec<String> = drawn.iter().map(|i| format!("{i:.4}")).collect();
        println!(
            "{label} load currents {}, phase sum {:.1e}",
            parts.join(" "),
            total.norm()
        );
    }
    Ok(())
}
