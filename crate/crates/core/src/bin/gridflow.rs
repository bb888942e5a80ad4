use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gridflow::admittance::{build, check_diagonal_dominance, check_minor_symmetry};
use gridflow::bench::{self, BenchConfig, Coupling};
use gridflow::model::{
    parse_feeder, parse_feeder_unchecked, serialize_feeder, validate_feeder, Severity,
};
use gridflow::powerflow::{solve, Iteration, SolveOptions};
use gridflow::sparse::{compress, memory_positions};
use gridflow::{Error, Result};

const FORMAT_NOTE: &str = "Feeder files use the gridflow JSON feeder format, version 1 (0-based indices, \
complex values as [re, im] pairs in per-unit). Relative feeder paths that do not exist are also looked up \
in $GRIDFLOW_FIXTURES.";

#[derive(Parser)]
#[command(name = "gridflow", version, about = "Three-phase feeder admittance tensors and load flow", after_help = FORMAT_NOTE)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a feeder file and list diagnostics
    #[command(after_help = FORMAT_NOTE)]
    Validate { feeder: PathBuf },
    /// Build the admittance tensor and print a summary
    #[command(after_help = FORMAT_NOTE)]
    Build {
        feeder: PathBuf,
        /// Write the dense tensor as nested [i][j][k][m] JSON
        #[arg(long, value_name = "PATH")]
        dump_tensor: Option<PathBuf>,
        /// Write the compressed {n_nodes, D, F, M, C, E} structure as JSON
        #[arg(long, value_name = "PATH")]
        dump_sparse: Option<PathBuf>,
    },
    /// Run the fixed-point load flow
    #[command(after_help = FORMAT_NOTE)]
    Solve {
        feeder: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
        /// Use the point-Jacobi sweep instead of the implicit iteration
        #[arg(long)]
        jacobi: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Time the sparse contraction against the flat 3N×3N product
    #[command(after_help = FORMAT_NOTE)]
    Bench {
        #[arg(long, default_value_t = 119)]
        nodes: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value = "full", value_parser = ["full", "diagonal"])]
        coupling: String,
        /// Benchmark the 119-node, 1586-non-zero feeder instead of a generated one
        #[arg(long)]
        ieee123_like: bool,
        /// Print JSON instead of the text table
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Write a synthetic radial feeder
    #[command(after_help = FORMAT_NOTE)]
    Generate {
        #[arg(long, default_value_t = 119)]
        nodes: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value = "full", value_parser = ["full", "diagonal"])]
        coupling: String,
        /// Emit the 119-node, 1586-non-zero feeder (ignores --nodes/--coupling)
        #[arg(long)]
        ieee123_like: bool,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Args)]
struct OutArg {
    /// Write JSON here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

impl OutArg {
    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, format!("{text}\n"))?,
            None => println!("{text}"),
        }
        Ok(())
    }
}

fn resolve(path: &Path) -> PathBuf {
    if path.exists() || path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os("GRIDFLOW_FIXTURES") {
        Some(dir) => {
            let candidate = Path::new(&dir).join(path);
            if candidate.exists() {
                return candidate;
            }
            let by_name = path.file_name().map(|name| Path::new(&dir).join(name));
            by_name
                .filter(|p| p.exists())
                .unwrap_or_else(|| path.to_path_buf())
        }
        None => path.to_path_buf(),
    }
}

fn read(path: &Path) -> Result<String> {
    let path = resolve(path);
    std::fs::read_to_string(&path).map_err(|err| {
        Error::Io(std::io::Error::new(
            err.kind(),
            format!("{}: {err}", path.display()),
        ))
    })
}

fn pretty(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Validate { feeder } => {
            let f = parse_feeder_unchecked(&read(&feeder)?)?;
            let diags = validate_feeder(&f);
            for d in &diags {
                eprintln!("{d}");
            }
            let valid = !diags.iter().any(|d| d.severity == Severity::Error);
            let listed: Vec<_> = diags
                .iter()
                .map(|d| serde_json::json!({"severity": d.severity.to_string(), "path": d.path, "message": d.message}))
                .collect();
            println!(
                "{}",
                pretty(&serde_json::json!({"valid": valid, "diagnostics": listed}))
            );
            Ok(if valid {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Build {
            feeder,
            dump_tensor,
            dump_sparse,
        } => {
            let f = parse_feeder(&read(&feeder)?)?;
            let y = build(&f)?;
            let sparse = compress(&y, 0.0);
            let dominance = check_diagonal_dominance(&y);
            if let Some(path) = dump_tensor {
                std::fs::write(
                    path,
                    serde_json::to_string(&y.to_json()).expect("serializable"),
                )?;
            }
            if let Some(path) = dump_sparse {
                std::fs::write(
                    path,
                    serde_json::to_string(&sparse.to_json()).expect("serializable"),
                )?;
            }
            let n = f.n_nodes;
            let summary = serde_json::json!({
                "n_nodes": n,
                "branches": f.branches.len(),
                "nnz": sparse.nnz(),
                "shapes": sparse.shapes(),
                "memory_positions": memory_positions(&sparse),
                "dense_positions": 9 * n * n,
                "max_minor_asymmetry": check_minor_symmetry(&y),
                "max_row_sum": dominance.max_row_sum(),
                "row_sum_dominance_violations": dominance.row_sum_violations(),
                "classical_dominance_violations": dominance.classical_violations(),
            });
            println!("{}", pretty(&summary));
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve {
            feeder,
            tol,
            max_iter,
            jacobi,
            out,
        } => {
            let f = parse_feeder(&read(&feeder)?)?;
            let y = compress(&build(&f)?, 0.0);
            let opts = SolveOptions {
                tol,
                max_iter,
                iteration: if jacobi {
                    Iteration::Jacobi
                } else {
                    Iteration::Implicit
                },
                ..Default::default()
            };
            let report = solve(&y, &f, &opts)?;
            out.emit(&pretty(&report.to_json()))?;
            if report.converged {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!(
                    "error: load flow did not converge ({:?} after {} iterations)",
                    report.status, report.iterations
                );
                Ok(ExitCode::from(1))
            }
        }
        Command::Bench {
            nodes,
            trials,
            seed,
            coupling,
            ieee123_like,
            json,
            out,
        } => {
            let report = if ieee123_like {
                bench::benchmark_feeder(&bench::ieee123_like(seed), trials, seed)?
            } else {
                let cfg = BenchConfig {
                    n_nodes: nodes,
                    trials,
                    seed,
                    coupling: coupling.parse::<Coupling>()?,
                };
                bench::run_benchmark(&cfg)?
            };
            if json || out.out.is_some() {
                out.emit(&serde_json::to_string_pretty(&report).expect("serializable"))?;
            } else {
                print!("{report}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Generate {
            nodes,
            seed,
            coupling,
            ieee123_like,
            out,
        } => {
            let f = if ieee123_like {
                bench::ieee123_like(seed)
            } else {
                if nodes < 2 {
                    return Err(Error::Config("--nodes must be at least 2".into()));
                }
                bench::generate_radial(nodes, seed, coupling.parse::<Coupling>()?)
            };
            out.emit(&serialize_feeder(&f))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
