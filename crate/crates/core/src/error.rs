use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("geometry violation: {0}")]
    GeometryViolation(String),

    /// The first-order bend model is outside its domain of validity.
    #[error("model validity: {0}")]
    ModelValidity(String),

    #[error("profile length {profile_m} m does not match fiber length {fiber_m} m")]
    LengthMismatch { profile_m: f64, fiber_m: f64 },

    #[error("degenerate filter: {0}")]
    DegenerateFilter(String),

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("parse error at `{key}` (line {line}): {message}")]
    Parse {
        key: String,
        line: usize,
        message: String,
    },

    #[error("validation error at `{key}`: {message}")]
    Validation { key: String, message: String },
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Validation { .. } | Error::InvalidArgument(_) => 2,
            Error::GeometryViolation(_) | Error::LengthMismatch { .. } => 2,
            Error::ModelValidity(_) | Error::DegenerateFilter(_) | Error::Resolution(_) => 3,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
