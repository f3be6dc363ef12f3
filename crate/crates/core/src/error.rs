use std::fmt;

/// Errors raised by the simulator.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Drift has an eigenvalue with non-negative real part.
    #[error("drift is not Hurwitz: eigenvalue {re:+.6e}{im:+.6e}i")]
    Unstable { re: f64, im: f64 },

    /// Mode-space drift does not map onto a real quadrature drift.
    #[error("quadrature drift has non-real residue {0:.3e}")]
    NonReal(f64),

    #[error("inconsistent mode equations: {0}")]
    Inconsistent(String),

    /// `sigma + (i/2) Omega` has an eigenvalue below tolerance.
    #[error("unphysical covariance: minimum eigenvalue {0:.3e}")]
    Unphysical(f64),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("{0}")]
    Config(ConfigError),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Parse diagnostic for configuration files.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "config error: {}", self.message)
        } else {
            write!(
                f,
                "config error at line {}, column {}: {}",
                self.line, self.column, self.message
            )
        }
    }
}

impl Error {
    pub(crate) fn config(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Config(ConfigError {
            line,
            column,
            message: message.into(),
        })
    }

    /// Process exit code class: 2 for configuration and input problems, 3 for
    /// numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io { .. } | Error::InvalidInput(_) | Error::Dimension(_) => 2,
            Error::Unstable { .. }
            | Error::NonReal(_)
            | Error::Inconsistent(_)
            | Error::Unphysical(_)
            | Error::Numerical(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
