//! `pencillab`: JSON in, JSON out. Exit codes: 0 ok, 2 invalid input,
//! 3 internal invariant violated, 4 unsupported input.

mod jobs;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use jobs::{exit_code, run_batch, run_job, BatchInput, Command, Job, Limits, DEFAULT_MAX_D};
use pencillab::Error;
use serde_json::Value;

#[derive(Parser)]
#[command(name = "pencillab", version, about = "Exact analysis of Hamiltonian pencils of line arrangements")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Repeat for more log output on standard error.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    /// Cap on the arrangement size d; overrides PENCILLAB_MAX_D.
    #[arg(long, global = true)]
    max_d: Option<usize>,
}

#[derive(Args, Clone)]
struct Io {
    /// Input JSON document.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Report destination; standard output if absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct Source {
    #[command(flatten)]
    io: Io,
    /// Use the canonical arrangement of d + 1 lines instead of an input file.
    #[arg(long)]
    canonical_d: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Combinatorics, Milnor number and critical spectrum of an arrangement.
    Analyze(Source),
    /// Intersection form, radical, monodromy generators and orbit certificates.
    Dynkin {
        #[command(flatten)]
        source: Source,
        /// Elide generator matrices when mu exceeds this.
        #[arg(long, default_value_t = 16)]
        max_matrix: usize,
    },
    /// Monodromy orbit span of one basis cycle (face:i, vertex:j, basis:k) or all.
    Orbit {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "all")]
        start: String,
    },
    /// Gauss-Manin connection of a form and the check nabla^n omega = 0.
    Connection {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Generators of ker nabla^n when f = 0 is the only reducible fiber.
    Kernel {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 2)]
        n: u32,
    },
    /// Decide omega = dP + Q df and return a witness.
    Relexact(Source),
    /// Melnikov recursion for a deformation df + eps^k omega_k + ... + eps^2k omega_2k.
    Melnikov(Io),
    /// Codimension and cyclicity bounds with the P_k dimension audit.
    Bounds {
        #[arg(long)]
        d: usize,
        /// Comma-separated degrees of the groups; all partitions if absent.
        #[arg(long, value_delimiter = ',')]
        partition: Option<Vec<usize>>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Randomized round-trips through the library.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        cases: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a list of jobs `{"jobs": [...]}` on a worker pool.
    Batch {
        #[command(flatten)]
        io: Io,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn read_input(path: &Option<PathBuf>) -> Result<Option<Value>, Error> {
    let Some(path) = path else { return Ok(None) };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::validation(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map(Some)
        .map_err(|e| Error::validation(format!("{} is not JSON: {e}", path.display())))
}

fn write_report(report: &Value, output: Option<&Path>) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(report).expect("values serialize");
    text.push('\n');
    match output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn limits(cli: &Cli) -> Result<Limits, Error> {
    let max_d = match (cli.max_d, std::env::var("PENCILLAB_MAX_D")) {
        (Some(d), _) => d,
        (None, Ok(s)) => s
            .trim()
            .parse()
            .map_err(|_| Error::validation(format!("PENCILLAB_MAX_D={s:?} is not a number")))?,
        (None, Err(_)) => DEFAULT_MAX_D,
    };
    Ok(Limits { max_d })
}

fn job(command: Command, source: &Source) -> Result<(Job, Option<PathBuf>), Error> {
    Ok((
        Job {
            command: Some(command),
            input: read_input(&source.io.input)?,
            canonical_d: source.canonical_d,
            ..Job::default()
        },
        source.io.output.clone(),
    ))
}

fn run(cli: &Cli) -> Result<u8, Error> {
    let limits = limits(cli)?;
    let (job, output) = match &cli.command {
        Cmd::Analyze(s) => job(Command::Analyze, s)?,
        Cmd::Dynkin { source, max_matrix } => {
            let (mut j, o) = job(Command::Dynkin, source)?;
            j.max_matrix = Some(*max_matrix);
            (j, o)
        }
        Cmd::Orbit { source, start } => {
            let (mut j, o) = job(Command::Orbit, source)?;
            j.start = Some(start.clone());
            (j, o)
        }
        Cmd::Connection { source, n } => {
            let (mut j, o) = job(Command::Connection, source)?;
            j.n = *n;
            (j, o)
        }
        Cmd::Kernel { source, n } => {
            let (mut j, o) = job(Command::Kernel, source)?;
            j.n = Some(*n);
            (j, o)
        }
        Cmd::Relexact(s) => job(Command::Relexact, s)?,
        Cmd::Melnikov(io) => (
            Job {
                command: Some(Command::Melnikov),
                input: read_input(&io.input)?,
                ..Job::default()
            },
            io.output.clone(),
        ),
        Cmd::Bounds { d, partition, output } => (
            Job {
                command: Some(Command::Bounds),
                d: Some(*d),
                partition: partition.clone(),
                ..Job::default()
            },
            output.clone(),
        ),
        Cmd::Selftest { seed, cases, output } => (
            Job {
                command: Some(Command::Selftest),
                seed: Some(*seed),
                cases: Some(*cases),
                ..Job::default()
            },
            output.clone(),
        ),
        Cmd::Batch { io, jobs } => {
            let input = read_input(&io.input)?.ok_or_else(|| Error::validation("batch needs --input"))?;
            let batch: BatchInput = serde_json::from_value(input)
                .map_err(|e| Error::validation(format!("malformed batch: {e}")))?;
            let workers = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let (report, code) = run_batch(&batch, limits, workers);
            write_report(&report, io.output.as_deref())
                .map_err(|e| Error::validation(format!("cannot write report: {e}")))?;
            return Ok(code);
        }
    };
    let report = run_job(&job, limits)?;
    write_report(&report, output.as_deref()).map_err(|e| Error::validation(format!("cannot write report: {e}")))?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("pencillab: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
