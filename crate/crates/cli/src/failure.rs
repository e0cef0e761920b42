use std::fmt;
use std::process::ExitCode;

use tailgof::Error;

pub type CliResult<T> = Result<T, CliError>;

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or arguments: exit 2.
    Usage(String),
    /// Input data that cannot be tested: exit 3.
    Data(String),
    /// Reading or writing files: exit 1.
    Io(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
        }
    }

    pub fn io(what: &str, e: std::io::Error) -> Self {
        CliError::Io(format!("{what}: {e}"))
    }

    /// Library error raised while handling input data.
    pub fn data(e: Error) -> Self {
        if e.is_usage() || matches!(e, Error::Grid(_)) {
            CliError::Usage(e.to_string())
        } else {
            CliError::Data(e.to_string())
        }
    }

    /// Library error raised by an operation that consumes no data file.
    pub fn usage(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::NonFinite { .. } | Error::BeyondSupport { .. } => {
                CliError::Data(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

/// Help and version go to stdout with status 0; every other parse failure
/// becomes a single `error:` line with status 2.
pub fn clap_exit(e: clap::Error) -> ExitCode {
    use clap::error::ErrorKind;
    match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
            let _ = e.print();
            ExitCode::SUCCESS
        }
        _ => {
            let rendered = e.render().to_string();
            let line = rendered
                .lines()
                .find_map(|l| l.strip_prefix("error: "))
                .unwrap_or("invalid arguments")
                .trim();
            eprintln!("error: {line}");
            ExitCode::from(2)
        }
    }
}
