//! Command-line harness around the `fapanc` filters: WAV and CSV I/O,
//! single runs, four-way comparisons and the oracle self-check.

pub mod args;
mod commands;
mod error;
mod output;
pub mod wav;

pub use error::{CliError, Result};

use args::{Cli, Command};

/// Runs one parsed invocation.
pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Run(a) => commands::run(a),
        Command::Compare(a) => commands::compare(a),
        Command::Synth(a) => commands::synth(a),
        Command::OracleCheck(a) => commands::oracle_check(a),
    }
}
