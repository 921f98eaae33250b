//! `monoshape run` and `monoshape report`.

mod config;
mod table;

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use monoshape::ratelab::{run_experiment, Regressor};

use config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad configuration or input file; exit status 2.
    #[error("{0}")]
    Usage(String),
    /// Filesystem failure; exit status 3.
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn status(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "monoshape", version, about = "Concave-majorant rate experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegressorArg {
    Lognlogn,
    Logn,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file and write a results CSV.
    Run {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides `experiment.seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; the output does not depend on this.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Fit log-log rates to a results CSV, one row per (model, statistic).
    Report {
        results: PathBuf,
        #[arg(long, value_enum)]
        regressor: RegressorArg,
        #[arg(long)]
        out: PathBuf,
    },
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| io_error(path, e))
}

fn run(config: &Path, out: &Path, seed: Option<u64>, threads: Option<usize>) -> Result<(), CliError> {
    let text = std::fs::read_to_string(config).map_err(|e| io_error(config, e))?;
    let cfg = RunConfig::parse(&text, seed)?;
    for (n, eps) in cfg.plan.epsilon_warnings() {
        eprintln!("warning: at n = {n} the local half-width {eps:.3e} is below (log n / n)^(1/(4-tau))");
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(k) = threads {
        if k == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        pool = pool.num_threads(k);
    }
    let pool = pool.build().map_err(|e| CliError::Io(e.to_string()))?;
    let table = pool
        .install(|| run_experiment(&cfg.plan))
        .map_err(|e| CliError::Usage(format!("experiment failed: {e}")))?;
    let mut w = create(out)?;
    table::write_results(&mut w, &table.rows)?;
    w.flush().map_err(|e| io_error(out, e))
}

fn report(results: &Path, regressor: Regressor, out: &Path) -> Result<(), CliError> {
    let file = File::open(results).map_err(|e| io_error(results, e))?;
    let rows = table::read_results(BufReader::new(file))?;
    let report = table::build_report(&rows, regressor);
    for r in &report {
        if let Some(msg) = &r.warning {
            eprintln!("warning: {},{}: {msg}", r.model, r.statistic);
        }
    }
    let mut w = create(out)?;
    table::write_report(&mut w, &report)?;
    w.flush().map_err(|e| io_error(out, e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            out,
            seed,
            threads,
        } => run(&config, &out, seed, threads),
        Command::Report {
            results,
            regressor,
            out,
        } => {
            let regressor = match regressor {
                RegressorArg::Lognlogn => Regressor::LogNOverN,
                RegressorArg::Logn => Regressor::LogN,
            };
            report(&results, regressor, &out)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status())
        }
    }
}
