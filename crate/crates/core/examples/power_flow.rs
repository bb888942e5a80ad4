//! Solves the load flow of a generated 30-node feeder and prints the
//! convergence history, losses and the lowest voltage.

use gridflow::admittance::build;
use gridflow::bench::{generate_radial, Coupling};
use gridflow::powerflow::{solve, SolveOptions};
use gridflow::sparse::compress;

fn main() -> gridflow::Result<()> {
    let feeder = generate_radial(30, 3, Coupling::Full);
    let y = compress(&build(&feeder)?, 0.0);
    let report = solve(&y, &feeder, &SolveOptions::default())?;

    println!(
        "status: {:?} after {} iterations",
        report.status, report.iterations
    );
    for (it, r) in report.residual_trace.iter().enumerate() {
        println!("  {:>2}  {r:.3e}", it + 1);
    }
    println!("losses: {:.6}", report.losses);
    println!("load:   {:.6}", feeder.total_load());

    let (phase, node, mag) = (0..feeder.n_nodes)
        .flat_map(|k| (0..3).map(move |p| (p, k)))
        .map(|(p, k)| (p, k, report.v[(p, k)].norm()))
        .fold(
            (0, 0, f64::INFINITY),
            |best, x| if x.2 < best.2 { x } else { best },
        );
    println!("lowest voltage: {mag:.5} p.u. at node {node}, phase {phase}");
    Ok(())
}
