//! Command-line front end for `unital-core`.
//!
//! [`run_command`] parses arguments, runs one subcommand, writes a single JSON
//! report to `out` and a short human summary to `err`, and returns the exit
//! code: 0 success, 1 validation failure, 2 parse or usage error, 3 tolerance
//! or convergence failure.

pub mod document;
pub mod error;
pub mod json;
pub mod report;

mod commands;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use commands::Cli;
pub use document::{
    parse_channel, parse_measurement, ChannelDocument, MeasurementDocument, StateDocument,
};
pub use error::{CliError, EXIT_OK, EXIT_PARSE, EXIT_TOLERANCE, EXIT_VALIDATION};
pub use report::AnalysisReport;

pub fn run_command<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    let outcome = commands::execute(&cli);
    let _ = writeln!(out, "{}", outcome.stdout);
    let _ = writeln!(err, "{}", outcome.summary);
    outcome.exit_code
}
