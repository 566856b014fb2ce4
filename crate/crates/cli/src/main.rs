mod chain;
mod check;
mod eliminate;
mod output;
mod simulate;

use std::path::PathBuf;
use std::process::ExitCode;

use bihv_core::Exec;
use clap::{Args, Parser, Subcommand};

/// Exact and numeric checks for the curvature ODE of biharmonic hypersurfaces.
#[derive(Parser, Debug)]
#[command(name = "bihv", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Root of the output tree; artifacts go to `<out>/<command>/<label>/`.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Name of the run directory (default: a timestamp).
    #[arg(long, global = true)]
    label: Option<String>,
    /// Run every loop on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

impl Common {
    fn exec(&self) -> Exec {
        if self.sequential {
            Exec::Sequential
        } else {
            Exec::default()
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reconstruct catalogued identities and compare them with the corpus.
    Check(check::CheckArgs),
    /// Run the pseudo-remainder sequence on two polynomials.
    Eliminate(eliminate::EliminateArgs),
    /// Integrate the system and report residuals.
    Simulate(simulate::SimulateArgs),
    /// Generate the polynomials P_0..P_kmax.
    Chain(chain::ChainArgs),
}

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad input: exit 2.
    Usage(String),
    /// A requested check did not pass: exit 1.
    Failed,
    /// The computation had to stop (blow-up, size guard): exit 3.
    Aborted(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failed => 1,
            CliError::Usage(_) => 2,
            CliError::Aborted(_) => 3,
        }
    }
}

pub type CliResult = Result<(), CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check(a) => check::run(a, &cli.common),
        Command::Eliminate(a) => eliminate::run(a, &cli.common),
        Command::Simulate(a) => simulate::run(a, &cli.common),
        Command::Chain(a) => chain::run(a, &cli.common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(m) => eprintln!("error: {m}"),
                CliError::Aborted(m) => eprintln!("aborted: {m}"),
                CliError::Failed => {}
            }
            ExitCode::from(e.code())
        }
    }
}
