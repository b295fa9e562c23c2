//! The `pcube` command line: argument parsing, instance loading and report
//! formatting around the `pcube` library.

pub mod args;
pub mod commands;
pub mod registry;
pub mod report;
pub mod source;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;

/// Exit status for a completed run whose asserted checks all passed.
pub const EXIT_OK: u8 = 0;
/// Some asserted check failed.
pub const EXIT_FAIL: u8 = 1;
/// Bad arguments, unreadable input or an instance outside a checker's domain.
pub const EXIT_CONFIG: u8 = 2;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
}

impl CliError {
    pub fn io(e: impl fmt::Display) -> Self {
        CliError::Io(e.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "{msg}"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<pcube::Error> for CliError {
    fn from(e: pcube::Error) -> Self {
        match e {
            pcube::Error::Io(e) => CliError::Io(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

/// Runs one invocation. The report is built in full before anything is
/// written, so a failing run never leaves partial output on `out`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_CONFIG
                }
            };
        }
    };
    let outcome = commands::dispatch(cli.command).and_then(|(report, format)| {
        let mut buf = Vec::new();
        report.write(format, &mut buf)?;
        Ok((report.failed(), buf))
    });
    match outcome {
        Ok((failed, buf)) => {
            if let Err(e) = out.write_all(&buf).and_then(|_| out.flush()) {
                let _ = writeln!(err, "pcube: {e}");
                return EXIT_CONFIG;
            }
            if failed {
                EXIT_FAIL
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(err, "pcube: {e}");
            EXIT_CONFIG
        }
    }
}

pub fn run_main() -> u8 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
