use thiserror::Error;

/// Library-wide error type.
///
/// The variants map onto the CLI exit codes: configuration/domain problems
/// exit with 1, numerical failures with 2, I/O failures with 3.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration, geometry or argument outside its admissible range.
    #[error("configuration error: {0}")]
    Config(String),
    /// A solver or iteration failed to converge, or a value left the
    /// representable/physical range during computation.
    #[error("numerical error: {0}")]
    Numerical(String),
    /// Fit rejected because no record passed the crack-width filter.
    #[error("not cracked: {0}")]
    NotCracked(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// Process exit code for the CLI front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            Error::Numerical(_) | Error::NotCracked(_) => 2,
            Error::Io(_) => 3,
        }
    }
}
