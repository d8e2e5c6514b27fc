//! `epsusy`: phase curves, two-fold SUSY transformations, chains and their verification.
//!
//! Exit codes: 0 ok, 1 a verification check failed, 2 configuration or input error,
//! 3 numerical failure, 4 unphysical case refused by the transformation.

mod commands;
mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use epsusy::Error;

use crate::commands::Sink;
use crate::config::RunConfig;

#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Run configuration (INI)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Worker threads for the per-k solves (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenphases and mixing angle of the model
    Phases,
    /// One transformation; writes the V2 table
    Transform,
    /// Iterated transformation over the chi list
    Chain,
    /// Checks the theorem (or the chain) and writes a report
    Verify,
    /// The s-d example with its baked-in parameters
    ExampleNf,
}

fn exit_code(e: &Error) -> u8 {
    match e.root() {
        Error::Config(_)
        | Error::Parse { .. }
        | Error::Format(_)
        | Error::Io(_)
        | Error::Domain(_) => 2,
        Error::Unphysical(_) => 4,
        _ => 3,
    }
}

fn run(cli: &Cli) -> Result<bool, Error> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::Config("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    let sink = Sink::new(&cli.out)?;
    if let Command::ExampleNf = cli.command {
        return commands::example_nf(&sink);
    }
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => {
            return Err(Error::Config(
                "--config is required for this command".into(),
            ))
        }
    };
    sink.write(Path::new(commands::RUN_INI), &cfg.to_ini_string())?;
    match cli.command {
        Command::Phases => commands::phases(&cfg, &sink),
        Command::Transform => commands::transform(&cfg, &sink),
        Command::Chain => commands::chain_cmd(&cfg, &sink),
        Command::Verify => commands::verify(&cfg, &sink),
        Command::ExampleNf => unreachable!(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
