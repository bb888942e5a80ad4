//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Run with `cargo test --release --test acceptance`
//! for representative timings.

mod common;

use std::time::{Duration, Instant};

use common::{
    max_abs_diff, newton_solve, random_feeder, random_field, slack_injection, ybus_stamp,
    RandomFeeder,
};
use gridflow::admittance::{apply_dense, build, check_diagonal_dominance, check_minor_symmetry};
use gridflow::bench::{benchmark_feeder, generate_radial, ieee123_like, Coupling};
use gridflow::model::{balanced_voltage, parse_feeder, FeederModel, Load, PhaseField};
use gridflow::powerflow::{
    delta_to_line_currents, line_to_line_voltages, load_injection, solve, SolveOptions,
};
use gridflow::sparse::{apply_sparse, compress, memory_positions, SparseAdmittance};
use num_complex::Complex64;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn sparse_of(f: &FeederModel) -> SparseAdmittance {
    compress(&build(f).unwrap(), 0.0)
}

fn memory_accounting() -> Outcome {
    let f = ieee123_like(7);
    let y = sparse_of(&f);
    let s = y.shapes();
    let n = f.n_nodes;
    let shapes_ok = s.m == (1586, 2)
        && s.d == (3, 119)
        && s.f == (1, 1586)
        && s.c == (3, 119)
        && s.e == (3, 119);
    let dense = 9 * n * n;
    check(
        n == 119 && y.nnz() == 1586 && memory_positions(&y) == 5829 && dense == 127449 && shapes_ok,
        format!(
            "N={n} P={} sparse={} dense={dense} M={:?} D={:?} F={:?} C={:?} E={:?}",
            y.nnz(),
            memory_positions(&y),
            s.m,
            s.d,
            s.f,
            s.c,
            s.e
        ),
    )
}

fn oracle_equivalence() -> Outcome {
    let mut worst_apply = 0.0_f64;
    let mut worst_stamp = 0.0_f64;
    let mut worst_stamp_abs = 0.0_f64;
    for seed in 0..100u64 {
        let n = 2 + (seed as usize * 7) % 19;
        let f = random_feeder(
            seed,
            RandomFeeder {
                mesh_edges: (seed % 3) as usize,
                shunts: seed % 2 == 0,
                ..RandomFeeder::radial(n)
            },
        );
        let dense = build(&f).unwrap();
        let v = random_field(seed ^ 0x5eed, n);
        let a = apply_sparse(&compress(&dense, 0.0), &v).unwrap();
        let b = apply_dense(&dense, &v).unwrap();
        worst_apply = worst_apply.max(a.max_abs_diff(&b) / b.max_abs().max(f64::MIN_POSITIVE));

        let flat = dense.to_flat();
        let oracle: Vec<Complex64> = ybus_stamp(&f).into_iter().flatten().collect();
        let abs = max_abs_diff(&flat, &oracle);
        let scale = oracle.iter().map(|x| x.norm()).fold(0.0, f64::max);
        worst_stamp_abs = worst_stamp_abs.max(abs);
        worst_stamp = worst_stamp.max(abs / scale);
    }
    check(
        worst_apply <= 1e-12 && worst_stamp <= 1e-14,
        format!(
            "100 feeders: apply rel {worst_apply:.2e} (≤1e-12), build vs stamping rel {worst_stamp:.2e} (≤1e-14 of max|y|, abs {worst_stamp_abs:.2e})"
        ),
    )
}

fn speedup() -> Outcome {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/radial_119.json");
    let f = parse_feeder(&std::fs::read_to_string(path).unwrap()).unwrap();
    let report = benchmark_feeder(&f, 50, 7).unwrap();
    check(
        report.speedup >= 5.0,
        format!(
            "N=119 median dense {:.3e} s, sparse {:.3e} s, speedup {:.1}x (≥5x)",
            report.t_dense_matvec, report.t_sparse_apply, report.speedup
        ),
    )
}

fn symmetry_suite() -> Outcome {
    let mut worst_sym = 0.0_f64;
    let mut worst_row = 0.0_f64;
    let mut violations = 0;
    for seed in 0..50u64 {
        let n = 2 + (seed as usize * 5) % 19;
        let base = RandomFeeder {
            mesh_edges: (seed % 4) as usize,
            ..RandomFeeder::radial(n)
        };
        let shunted = build(&random_feeder(
            seed,
            RandomFeeder {
                shunts: true,
                ..base
            },
        ))
        .unwrap();
        worst_sym = worst_sym.max(check_minor_symmetry(&shunted));

        let plain = build(&random_feeder(seed, base)).unwrap();
        worst_sym = worst_sym.max(check_minor_symmetry(&plain));
        let report = check_diagonal_dominance(&plain);
        worst_row = worst_row.max(report.max_row_sum());
        violations += report.row_sum_violations();
    }
    check(
        worst_sym <= 1e-13 && worst_row <= 1e-13 && violations == 0,
        format!("50 feeders: minor symmetry {worst_sym:.2e}, row sum {worst_row:.2e} (≤1e-13), dominance violations {violations}"),
    )
}

fn power_flow() -> Outcome {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/two_node.json");
    let mut feeders = vec![(
        "two_node".to_string(),
        parse_feeder(&std::fs::read_to_string(path).unwrap()).unwrap(),
    )];
    feeders.extend((0..10).map(|seed| {
        (
            format!("radial30/seed{seed}"),
            generate_radial(30, seed, Coupling::Full),
        )
    }));

    let opts = SolveOptions::default();
    let mut all_converged = true;
    let mut max_iter = 0;
    let mut worst_newton = 0.0_f64;
    let mut worst_balance = 0.0_f64;
    let mut over = Vec::new();
    for (name, f) in &feeders {
        let report = solve(&sparse_of(f), f, &opts).unwrap();
        all_converged &= report.converged;
        max_iter = max_iter.max(report.iterations);
        match newton_solve(f) {
            Some(v) => worst_newton = worst_newton.max(report.v.max_abs_diff(&v)),
            None => worst_newton = f64::INFINITY,
        }
        let balance = (slack_injection(f, &report.v) - f.total_load() - report.losses).norm();
        if balance > 1e-10 {
            over.push(name.as_str());
        }
        worst_balance = worst_balance.max(balance);
    }
    check(
        all_converged && max_iter <= 200 && worst_newton <= 1e-8 && worst_balance <= 1e-10,
        format!(
            "11 feeders: converged {all_converged}, max iterations {max_iter}, newton {worst_newton:.2e} (≤1e-8), balance {worst_balance:.2e} (≤1e-10, over on {over:?})"
        ),
    )
}

fn transform_identities() -> Outcome {
    let a = balanced_voltage();
    let mut worst = 0.0_f64;

    let equal = line_to_line_voltages(&PhaseField::uniform(3, [Complex64::new(0.7, -0.2); 3]));
    worst = worst.max(equal.max_abs());

    let vll = line_to_line_voltages(&PhaseField::uniform(1, a));
    let sqrt3 = 3f64.sqrt();
    for p in 0..3 {
        let expected = a[p] * Complex64::from_polar(sqrt3, std::f64::consts::PI / 6.0);
        worst = worst.max((vll[(p, 0)] - expected).norm());
    }

    for seed in 0..20 {
        let line = delta_to_line_currents(&random_field(seed, 8));
        for k in 0..8 {
            worst = worst.max(line.node(k).iter().sum::<Complex64>().norm());
        }
    }

    // unit delta leg on ab draws ±1/√3 on phases a and b only
    let v = PhaseField::uniform(2, a);
    let s = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
    ];
    let drawn = load_injection(&Load::delta(1, s), &v).unwrap();
    worst = worst.max((drawn[0].norm() - 1.0 / sqrt3).abs());
    worst = worst.max((drawn[1].norm() - 1.0 / sqrt3).abs());
    worst = worst.max(drawn[2].norm());

    check(
        worst <= 1e-14,
        format!("worst identity error {worst:.2e} (≤1e-14)"),
    )
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 6] = [
        (
            "memory accounting",
            memory_accounting,
            Duration::from_secs(1),
        ),
        (
            "sparse/dense oracle equivalence",
            oracle_equivalence,
            Duration::from_secs(10),
        ),
        ("speedup", speedup, Duration::from_secs(30)),
        ("symmetry suite", symmetry_suite, Duration::from_secs(5)),
        (
            "power-flow correctness",
            power_flow,
            Duration::from_secs(20),
        ),
        (
            "transform identities",
            transform_identities,
            Duration::from_secs(1),
        ),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let pass = outcome.pass && elapsed <= budget;
        if !pass {
            failed += 1;
        }
        println!(
            "{} {name}: {} [{:.2} s, budget {} s]",
            if pass { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} passed, {failed} failed", 6 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
