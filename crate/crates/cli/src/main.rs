//! Command-line frontend: simulate circuit files and reproduce the
//! benchmark families, reporting node and distinct-complex statistics as a
//! table or JSON.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::path::PathBuf;

use mddsim::RunOptions;

#[derive(Parser)]
#[command(
    name = "mddsim",
    version,
    about = "Mixed-dimensional qudit circuit simulator backed by decision diagrams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a circuit file.
    Simulate {
        /// Circuit file in the line-oriented `qudits / gate / measure` format.
        file: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Generate and simulate a benchmark instance.
    Bench {
        #[command(subcommand)]
        family: BenchCommand,
    },
}

#[derive(Subcommand)]
enum BenchCommand {
    /// GHZ state on n qudits of equal dimension.
    Ghz {
        /// Number of qudits.
        #[arg(long)]
        n: usize,
        /// Level count of every qudit.
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// W state over an explicit dimension list.
    Wstate {
        /// Comma-separated wire dimensions, e.g. `2,2,3,3`.
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Seeded random circuit.
    Random {
        /// Comma-separated wire dimensions.
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        /// Number of gates to draw.
        #[arg(long)]
        ops: usize,
        #[command(flatten)]
        opts: CommonOpts,
    },
}

#[derive(Args)]
struct CommonOpts {
    /// Measurement outcomes to draw from the final state.
    #[arg(long, default_value_t = 0)]
    samples: usize,
    /// Seed for the measurement sampler; `bench random` also derives its
    /// circuit from this seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Complex-table deduplication tolerance. Falls back to the MDDSIM_TOL
    /// environment variable, then to 1e-13.
    #[arg(long)]
    tol: Option<f64>,
    /// Emit a JSON report instead of the human-readable table.
    #[arg(long)]
    json: bool,
}

#[derive(Serialize)]
struct Report {
    benchmark: String,
    qudits: usize,
    dims: Vec<usize>,
    operations: usize,
    nodes: usize,
    distinct_complex: usize,
    runtime_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<Vec<Vec<usize>>>,
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    1
                }
            };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(message) => {
            eprintln!("error: {message}");
            2
        }
    }
}

fn execute(cli: Cli) -> Result<(), String> {
    let (name, circuit, opts) = match cli.command {
        Command::Simulate { file, opts } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
            let circuit = mddsim::parse(&text).map_err(|e| e.to_string())?;
            let name = file
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "simulate".to_string());
            (name, circuit, opts)
        }
        Command::Bench { family } => match family {
            BenchCommand::Ghz { n, dim, opts } => (
                "ghz".to_string(),
                mddsim::ghz_circuit(n, dim).map_err(|e| e.to_string())?,
                opts,
            ),
            BenchCommand::Wstate { dims, opts } => (
                "wstate".to_string(),
                mddsim::w_state_circuit(&dims).map_err(|e| e.to_string())?,
                opts,
            ),
            BenchCommand::Random { dims, ops, opts } => (
                "random".to_string(),
                mddsim::random_circuit(&dims, ops, opts.seed).map_err(|e| e.to_string())?,
                opts,
            ),
        },
    };

    let tolerance = resolve_tolerance(&opts)?;
    let run_options = RunOptions {
        seed: opts.seed,
        samples: opts.samples,
        tolerance,
    };
    let outcome = mddsim::run(&circuit, &run_options).map_err(|e| e.to_string())?;

    let report = Report {
        benchmark: name,
        qudits: circuit.register().num_qudits(),
        dims: circuit.register().dims().to_vec(),
        operations: outcome.op_count,
        nodes: outcome.stats.node_count,
        distinct_complex: outcome.stats.distinct_complex,
        runtime_seconds: outcome.runtime_seconds,
        samples: if opts.samples > 0 {
            Some(
                outcome
                    .samples
                    .iter()
                    .map(|s| s.digits().to_vec())
                    .collect(),
            )
        } else {
            None
        },
    };

    if opts.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?
        );
    } else {
        print_table(&report);
    }
    Ok(())
}

fn resolve_tolerance(opts: &CommonOpts) -> Result<f64, String> {
    let tol = match opts.tol {
        Some(t) => t,
        None => match std::env::var("MDDSIM_TOL") {
            Ok(text) => text
                .parse::<f64>()
                .map_err(|_| format!("MDDSIM_TOL value `{text}` is not a number"))?,
            Err(_) => mddsim::DEFAULT_TOLERANCE,
        },
    };
    if !(tol.is_finite() && tol > 0.0) {
        return Err(format!("tolerance must be positive and finite, got {tol}"));
    }
    Ok(tol)
}

fn print_table(report: &Report) {
    let mut histogram = [0usize; 4];
    let mut other = 0usize;
    for &d in &report.dims {
        match d {
            2..=5 => histogram[d - 2] += 1,
            _ => other += 1,
        }
    }
    println!(
        "{:<10} {:>6} {:>5} {:>5} {:>5} {:>5} {:>5} {:>8} {:>7} {:>10} {:>12}",
        "benchmark", "qudits", "2", "3", "4", "5", "other", "ops", "nodes", "distinct C", "runtime[s]"
    );
    println!(
        "{:<10} {:>6} {:>5} {:>5} {:>5} {:>5} {:>5} {:>8} {:>7} {:>10} {:>12.6}",
        report.benchmark,
        report.qudits,
        histogram[0],
        histogram[1],
        histogram[2],
        histogram[3],
        other,
        report.operations,
        report.nodes,
        report.distinct_complex,
        report.runtime_seconds,
    );
    if let Some(samples) = &report.samples {
        println!("samples:");
        for digits in samples {
            let line: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
            println!("  {}", line.join(" "));
        }
    }
}
