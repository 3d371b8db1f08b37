//! Crate-wide error type.

use std::fmt;

#[derive(Debug)]
pub enum Error {
    /// Incompatible dimensions between operands.
    Dimension(String),
    /// Factorization hit a pivot below the singularity threshold.
    Singular { pivot: usize },
    /// Triangular solve met a zero diagonal entry.
    ZeroDiagonal { row: usize },
    /// An iterative process exceeded its iteration cap.
    NonConvergence(String),
    /// A sub-system factorization inside a preconditioner build failed.
    Factorization { system: String, pivot: usize },
    /// Two algebraically equal computation routes disagreed beyond tolerance.
    Inconsistency { context: String, defect: f64 },
    /// Malformed input file.
    Parse { line: usize, message: String },
    /// Invalid argument or configuration.
    Invalid(String),
    Io(std::io::Error),
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension(msg) => write!(f, "dimension mismatch: {msg}"),
            Error::Singular { pivot } => {
                write!(f, "matrix is numerically singular at pivot {pivot}")
            }
            Error::ZeroDiagonal { row } => {
                write!(f, "zero diagonal entry in triangular solve at row {row}")
            }
            Error::NonConvergence(msg) => write!(f, "did not converge: {msg}"),
            Error::Factorization { system, pivot } => {
                write!(f, "factorization of sub-system {system} failed at pivot {pivot}")
            }
            Error::Inconsistency { context, defect } => {
                write!(f, "internal inconsistency in {context}: defect {defect:.3e}")
            }
            Error::Parse { line, message } => write!(f, "parse error at line {line}: {message}"),
            Error::Invalid(msg) => write!(f, "invalid argument: {msg}"),
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
