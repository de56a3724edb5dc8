use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A transition dipole in the cascade is below the vanishing tolerance,
    /// so the forbidden angle is undefined for this level selection.
    #[error("transition dipole vanishes: |{name}| = {magnitude:.3e} D")]
    VanishingDipole { name: &'static str, magnitude: f64 },

    #[error("J_max did not converge below {limit} (last relative change {last_change:.3e})")]
    Convergence { limit: u32, last_change: f64 },

    #[error("numerical failure in {context}: {detail}")]
    Numerical { context: String, detail: String },

    #[error("non-unique steady state: {null_dim} singular values below tolerance")]
    NonUniqueSteadyState { null_dim: usize },

    #[error("missing config key `{0}`")]
    MissingKey(String),

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit status: 2 for configuration and input problems, 3 for
    /// numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::MissingKey(_) | Error::Config { .. } | Error::Io(_) => 2,
            Error::VanishingDipole { .. }
            | Error::Convergence { .. }
            | Error::Numerical { .. }
            | Error::NonUniqueSteadyState { .. } => 3,
        }
    }

    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
