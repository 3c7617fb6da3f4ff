//! `paracoh`: command-line front end.
//!
//! Exit codes: 0 ok, 2 input error, 3 internal invariant breach, 4 counterexample.

mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "paracoh",
    version,
    about = "Invariant cohomology of Lie algebras with para-complex structures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Subgroup dimensions, representatives and pure/full verdicts.
    Analyze(AnalyzeArgs),
    /// Scan a one-parameter family K_t.
    Deform(DeformArgs),
    /// Decide existence of an invariant D-Kähler form.
    Dkahler(DkahlerArgs),
    /// Check pure-and-full and Abelianity on random integrable structures.
    RandomCheck(RandomCheckArgs),
    /// List, show or re-check catalog entries.
    Catalog(CatalogArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Cohomology,
    Homology,
    Both,
}

#[derive(Args, Debug, Clone)]
pub struct Source {
    /// Structure equations, e.g. "(0,0,12,13)".
    #[arg(long, conflicts_with = "catalog")]
    pub algebra: Option<String>,
    /// Catalog entry name.
    #[arg(long)]
    pub catalog: Option<String>,
    /// Structure name within the catalog entry.
    #[arg(long, requires = "catalog")]
    pub structure: Option<String>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub source: Source,
    /// K as a sign pattern "(+,-,...)" or matrix rows "a,b; c,d".
    #[arg(long, conflicts_with = "catalog")]
    pub k: Option<String>,
    /// Stages to analyze; defaults to every stage.
    #[arg(long, value_delimiter = ',')]
    pub stage: Vec<usize>,
    #[arg(long, value_enum, default_value = "cohomology")]
    pub side: SideArg,
    /// Point of a catalog family at which to evaluate K_t.
    #[arg(long)]
    pub at: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct DeformArgs {
    #[command(flatten)]
    pub source: Source,
    /// Inline K_t, rows separated by ';', entries in Q(t).
    #[arg(long, conflicts_with = "catalog")]
    pub family: Option<String>,
    /// Sample points, e.g. "0,1/2,1".
    #[arg(long, value_delimiter = ',', required = true)]
    pub t: Vec<String>,
    #[arg(long, default_value_t = 2)]
    pub stage: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct DkahlerArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, conflicts_with = "catalog")]
    pub k: Option<String>,
    /// Point of a catalog family at which to evaluate K_t.
    #[arg(long)]
    pub at: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct RandomCheckArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long)]
    pub trials: usize,
    #[arg(long)]
    pub seed: u64,
    /// Rejection-sampling budget per trial.
    #[arg(long, default_value_t = 100_000)]
    pub max_attempts: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct CatalogArgs {
    #[command(subcommand)]
    pub action: CatalogAction,
}

#[derive(Subcommand, Debug)]
pub enum CatalogAction {
    /// Names and algebras.
    List,
    /// The fixture document of one entry.
    Show {
        name: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Recompute stored expectations; exit 4 on disagreement.
    Check { name: Option<String> },
}

pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(msg: impl std::fmt::Display) -> Self {
        CliError {
            code: 2,
            message: msg.to_string(),
        }
    }

    pub fn breach(msg: impl std::fmt::Display) -> Self {
        CliError {
            code: 3,
            message: msg.to_string(),
        }
    }
}

/// Output text plus exit code.
pub struct Outcome {
    pub text: String,
    pub code: u8,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = commands::pool().and_then(|pool| pool.install(|| commands::run(&cli.command)));
    match result {
        Ok(out) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &out.text),
                None => std::io::stdout().write_all(out.text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
