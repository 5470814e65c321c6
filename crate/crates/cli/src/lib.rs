//! Command-line workbench for `qaclab-core`: file formats, report bundles and
//! the `qaclab` dispatcher.

pub mod commands;
pub mod error;
pub mod formats;
pub mod json;

use std::ffi::OsString;

use clap::Parser;

use commands::{Cli, Io};
use error::CliError;

/// Environment variable that lowers the qubit cap.
pub const CAP_ENV: &str = "QACLAB_QUBIT_CAP";

fn apply_cap_env() -> Result<(), CliError> {
    match std::env::var(CAP_ENV) {
        Ok(v) => {
            let cap = v.trim().parse::<usize>().map_err(|_| {
                CliError::Usage(format!(
                    "{CAP_ENV} must be a non-negative integer, got {v:?}"
                ))
            })?;
            qaclab_core::set_qubit_cap(cap);
            Ok(())
        }
        Err(std::env::VarError::NotPresent) => Ok(()),
        Err(e) => Err(CliError::Usage(format!("{CAP_ENV}: {e}"))),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code: 0 success, 1 failed check, 2 usage, 3 I/O.
pub fn run<I, T>(args: I, io: &mut Io) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(io.err, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = apply_cap_env().and_then(|_| commands::execute(cli, io));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(io.err, "error: {e}");
            e.exit_code()
        }
    }
}
