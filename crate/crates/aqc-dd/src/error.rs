use thiserror::Error;

/// Crate-wide error type.
///
/// The variants map onto the CLI exit codes: input/config problems exit
/// with 1, numerical-integrity failures with 2, and statistical
/// validation failures with 3.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated (dimension mismatch,
    /// out-of-range time, malformed bit string, ...).
    #[error("input error: {0}")]
    Input(String),

    /// A config file or flag set could not be turned into a runnable
    /// experiment.
    #[error("config error: {0}")]
    Config(String),

    /// A matrix that must be unitary/Hermitian/positive failed its
    /// tolerance check, or an internal construction broke down.
    #[error("numerical integrity error: {0}")]
    NumericalIntegrity(String),

    /// A statistical acceptance check (noise validation) failed.
    #[error("statistical validation failure: {0}")]
    StatisticalValidation(String),

    /// The spectrum is fully degenerate within tolerance; no gap exists.
    #[error("no spectral gap: all eigenvalues within {tol} of {lowest}")]
    NoGap { lowest: f64, tol: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn integrity(msg: impl Into<String>) -> Self {
        Error::NumericalIntegrity(msg.into())
    }

    /// Exit code used by the command-line interface for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Config(_) | Error::Io(_) => 1,
            Error::NumericalIntegrity(_) | Error::NoGap { .. } => 2,
            Error::StatisticalValidation(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
