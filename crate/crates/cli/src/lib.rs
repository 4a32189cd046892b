//! The `depsig` command line: argument parsing, config resolution and the
//! mapping from failures to exit codes.

pub mod args;
mod commands;
pub mod config;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

use depsig::corpus::CorpusError;
use depsig::interpret::InterpretError;
use depsig::model::ModelError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

fn is_parameter_error(e: &depsig::Error) -> bool {
    matches!(
        e,
        depsig::Error::Model(ModelError::InvalidConfig(_))
            | depsig::Error::Corpus(CorpusError::BadFraction(_))
            | depsig::Error::Interpret(
                InterpretError::TooFewRuns(_) | InterpretError::BadFraction(_) | InterpretError::ZeroK
            )
    )
}

impl From<depsig::Error> for CliError {
    fn from(e: depsig::Error) -> Self {
        if e.is_numeric() {
            CliError::Numeric(e.to_string())
        } else if is_parameter_error(&e) {
            CliError::Usage(e.to_string())
        } else {
            CliError::Data(e.to_string())
        }
    }
}

macro_rules! via_core_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                depsig::Error::from(e).into()
            }
        }
    )*};
}

via_core_error!(
    CorpusError,
    ModelError,
    InterpretError,
    depsig::evaluation::EvalError,
    depsig::features::FeatureError,
    depsig::text_analysis::LexiconError
);

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match commands::dispatch(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("depsig: error: {e}");
            e.exit_code()
        }
    }
}
