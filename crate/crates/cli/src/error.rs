use std::fmt;
use std::path::Path;

use captionprobe::ErrorKind;

/// A failed command: what went wrong and which exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Usage,
            message: message.into(),
        }
    }

    pub fn data(message: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Data,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        exit_code(self.kind)
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            ErrorKind::Usage => "usage",
            ErrorKind::Data => "data",
            ErrorKind::Io => "io",
        }
    }
}

pub fn exit_code(kind: ErrorKind) -> i32 {
    match kind {
        ErrorKind::Usage => 1,
        ErrorKind::Data => 2,
        ErrorKind::Io => 3,
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<captionprobe::Error> for CliError {
    fn from(e: captionprobe::Error) -> Self {
        CliError {
            kind: e.kind(),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            kind: ErrorKind::Io,
            message: format!("I/O error: {e}"),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Attaches the offending path to an error.
pub trait WithPath<T> {
    fn at(self, path: &Path) -> CliResult<T>;
}

impl<T, E: Into<CliError>> WithPath<T> for std::result::Result<T, E> {
    fn at(self, path: &Path) -> CliResult<T> {
        self.map_err(|e| {
            let mut e = e.into();
            e.message = format!("{}: {}", path.display(), e.message);
            e
        })
    }
}
