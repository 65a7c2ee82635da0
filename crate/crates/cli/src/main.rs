mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use oirs_core::Scheme;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "oirs", version, about = "V2V visible light link simulator: mirror-array IRS, AF relay, road reflection")]
struct Cli {
    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Scenario file (TOML); built-in defaults when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Override one scenario key, e.g. `--set geometry.d_sr=150` or `--set n_m=50`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,

    /// Output directory for CSV files and manifest.json.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Seed for Monte Carlo BER.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Also estimate BER by Monte Carlo with this many bits.
    #[arg(long = "mc-bits", global = true, value_name = "N")]
    pub mc_bits: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one link and print its budget.
    Eval {
        #[arg(long, default_value = "irs", value_parser = parse_scheme)]
        scheme: Scheme,
        /// Print the JSON record instead of the text summary.
        #[arg(long)]
        json: bool,
    },
    /// Run a named sweep: fig3a, fig3b, fig4, d_sr or n_m.
    Sweep {
        name: String,
        /// Scheme for the d_sr and n_m sweeps.
        #[arg(long, default_value = "irs", value_parser = parse_scheme)]
        scheme: Scheme,
    },
    /// Maximum d_SR at the target BER for every scheme.
    Table2,
    /// Smallest array size that outperforms the relay, per distance in `sweep.d_sr_series`.
    Crossover,
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse().map_err(|e: oirs_core::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let result = match cli.command {
        Command::Eval { scheme, json } => commands::eval(&cli.common, &args, scheme, json),
        Command::Sweep { name, scheme } => commands::sweep(&cli.common, &args, &name, scheme),
        Command::Table2 => commands::table2(&cli.common, &args),
        Command::Crossover => commands::crossover(&cli.common, &args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report(e),
    }
}

fn report(e: CliError) -> ExitCode {
    eprintln!("oirs: {}: {e}", e.kind());
    ExitCode::from(e.exit_code())
}
