//! `neron run <job.json>`: batch driver for job files.

mod job;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use neron_core::GroebnerConfig;

use crate::run::{run_job, Report};

#[derive(Parser)]
#[command(name = "neron", version, about = "Strict birational group laws and Néron smoothening")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Runs the commands of a job file.
    Run {
        job: PathBuf,
        /// Writes the JSON report here instead of standard output.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Degree cap for Gröbner basis computations.
        #[arg(long)]
        max_degree: Option<u32>,
        /// Basis-size cap for Gröbner basis computations.
        #[arg(long)]
        max_basis: Option<usize>,
        /// Word-length bound for atlas construction.
        #[arg(long)]
        word_bound: Option<usize>,
    },
}

/// Effective caps after combining defaults, the job file and flags.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub max_degree: u32,
    pub max_basis: usize,
    pub word_bound: usize,
}

const DEFAULT_WORD_BOUND: usize = 1;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Cmd::Run {
        job: path,
        report,
        max_degree,
        max_basis,
        word_bound,
    } = cli.command;
    let name = path.display().to_string();
    let result = std::fs::read_to_string(&path)
        .map_err(|e| format!("cannot read {name}: {e}"))
        .and_then(|text| serde_json::from_str::<job::Job>(&text).map_err(|e| format!("invalid job file: {e}")));
    let out = match result {
        Err(msg) => Report::input_error(&name, msg),
        Ok(mut job) => {
            if job.name.is_empty() {
                job.name = name.clone();
            }
            let file_caps = job.caps.unwrap_or_default();
            let defaults = GroebnerConfig::default();
            let caps = Caps {
                max_degree: max_degree.or(file_caps.max_degree).unwrap_or(defaults.max_degree),
                max_basis: max_basis.or(file_caps.max_basis).unwrap_or(defaults.max_basis),
                word_bound: word_bound.or(file_caps.word_bound).unwrap_or(DEFAULT_WORD_BOUND),
            };
            GroebnerConfig::set_process_default(GroebnerConfig {
                max_basis: caps.max_basis,
                max_degree: caps.max_degree,
            });
            run_job(&job, caps)
        }
    };
    let json = serde_json::to_string_pretty(&out).expect("report serializes") + "\n";
    eprint!("{}", out.summary());
    match report {
        Some(p) => {
            if let Err(e) = std::fs::write(&p, json) {
                eprintln!("cannot write {}: {e}", p.display());
                return ExitCode::from(run::EXIT_INPUT as u8);
            }
        }
        None => print!("{json}"),
    }
    ExitCode::from(out.exit_code as u8)
}
