use thiserror::Error;

/// Errors produced by mapping construction and evaluation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed or inconsistent input data.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A point lies outside the domain a map or inverse is defined on.
    #[error("point outside domain: {0}")]
    OutOfDomain(String),

    /// Evaluation requested within tolerance of a pole.
    #[error("evaluation at a pole: {0}")]
    Pole(String),

    /// A linear system is singular or too ill-conditioned to trust.
    #[error("ill-conditioned system (condition estimate {condition:.3e}): {context}")]
    IllConditioned { context: String, condition: f64 },

    /// A user-supplied function returned a non-finite value.
    #[error("non-finite value: {0}")]
    NonFinite(String),

    /// A mapping is not bijective where bijectivity is required.
    #[error("mapping is not bijective: {0}")]
    NotBijective(String),

    /// File or stream failure.
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// True for numerical failures (singularity, pole, domain violations) as
    /// opposed to malformed input.
    pub fn is_numeric(&self) -> bool {
        !matches!(self, Error::InvalidInput(_) | Error::Io(_))
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidInput(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
