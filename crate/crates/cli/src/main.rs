use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gsemo_cli::bundle::{to_json_line, Bundle};
use gsemo_cli::config::{ConfigOverrides, ExperimentConfig};
use gsemo_cli::experiment::{cmd_experiment_with, cmd_gen};
use gsemo_cli::report::cmd_report;
use gsemo_cli::store::{RunLine, Store, STORE_FILE};
use gsemo_cli::verify::cmd_verify;
use gsemo_cli::{CliError, Result};
use gsemo_core::{greedy, gsemo, GsemoParams, OracleCounter};

#[derive(Parser)]
#[command(name = "gsemo", version, about = "GSEMO and GREEDY under partition matroid constraints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Greedy,
    Gsemo,
}

#[derive(Subcommand)]
enum Command {
    /// Generate instance bundles under <output-dir>/instances.
    Gen(ConfigOverrides),
    /// Run one algorithm on a bundle and print the run record as JSON.
    Solve {
        bundle: PathBuf,
        #[arg(long, value_enum)]
        algorithm: AlgorithmArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// GSEMO iterations; defaults to 4n².
        #[arg(long)]
        iterations: Option<u64>,
        #[arg(long)]
        trace_stride: Option<u64>,
        /// Also append the record to this store.
        #[arg(long)]
        store: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        repeat: usize,
    },
    /// Run GREEDY once and GSEMO `repeats` times per instance into <output-dir>/store.jsonl.
    Experiment(ConfigOverrides),
    /// Write report.csv and report.md from a store.
    Report {
        /// Defaults to <output-dir>/store.jsonl.
        #[arg(long)]
        store: Option<PathBuf>,
        /// Defaults to the store's directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Compare GREEDY and GSEMO against brute-force bounds on a tiny bundle.
    Verify {
        bundle: PathBuf,
        /// Defaults to 10·⌈e·d̄·n·(d+1)⌉.
        #[arg(long)]
        iterations: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn print(s: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(s.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::io(std::path::Path::new("<stdout>"), e))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen(o) => {
            let c = ExperimentConfig::resolve(&o)?;
            let ids = cmd_gen(&c)?;
            let mut s = String::new();
            for (id, _) in &ids {
                s.push_str(id);
                s.push('\n');
            }
            print(&s)?;
            eprintln!("wrote {} bundles to {}", ids.len(), c.output_dir().join("instances").display());
        }
        Command::Solve {
            bundle,
            algorithm,
            seed,
            iterations,
            trace_stride,
            store,
            repeat,
        } => {
            let b = Bundle::load(&bundle)?;
            let n = b.constraint.n() as u64;
            let mut counter = OracleCounter::new();
            let record = match algorithm {
                AlgorithmArg::Greedy => greedy(&b.objective, &b.constraint, &mut counter)?,
                AlgorithmArg::Gsemo => gsemo(
                    &b.objective,
                    &b.constraint,
                    &GsemoParams {
                        iterations: iterations.unwrap_or(4 * n * n),
                        seed,
                        trace_stride: trace_stride.filter(|&s| s > 0),
                    },
                    &mut counter,
                )?,
            };
            let line = RunLine::new(&b.meta.instance_id, repeat, &record);
            print(&to_json_line(&line))?;
            if let Some(path) = store {
                Store::open(&path)?.add_run(line)?;
            }
        }
        Command::Experiment(o) => {
            let c = ExperimentConfig::resolve(&o)?;
            let out = cmd_experiment_with(&c, |done, total| {
                eprintln!("[{done}/{total}] instances");
            })?;
            eprintln!(
                "{} instances, {} runs added, {} already present; store {}",
                out.instances,
                out.runs_added,
                out.runs_skipped,
                out.store.display()
            );
        }
        Command::Report {
            store,
            out,
            output_dir,
        } => {
            let store = match (store, output_dir) {
                (Some(s), _) => s,
                (None, dir) => dir
                    .or_else(|| std::env::var_os(gsemo_cli::config::OUTPUT_DIR_ENV).map(PathBuf::from))
                    .unwrap_or_else(|| PathBuf::from(gsemo_cli::config::DEFAULT_OUTPUT_DIR))
                    .join(STORE_FILE),
            };
            let out = out.unwrap_or_else(|| {
                store
                    .parent()
                    .map_or_else(|| PathBuf::from("."), PathBuf::from)
            });
            let (csv, md) = cmd_report(&store, &out)?;
            eprintln!("wrote {} and {}", csv.display(), md.display());
        }
        Command::Verify {
            bundle,
            iterations,
            seed,
        } => {
            let b = Bundle::load(&bundle)?;
            let report = cmd_verify(&b, iterations, seed)?;
            print(&gsemo_cli::bundle::to_json(&report))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
