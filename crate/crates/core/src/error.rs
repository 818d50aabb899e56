use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate cavity: |{what}| = {value:e}")]
    DegenerateCavity { what: &'static str, value: f64 },

    #[error("model inconsistency: {0}")]
    ModelInconsistency(String),

    #[error("undefined statistics: {0}")]
    UndefinedStatistics(&'static str),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// CLI exit status: 1 for bad input, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter { .. }
            | Error::Precondition(_)
            | Error::Config(_)
            | Error::Io(_) => 1,
            Error::DegenerateCavity { .. }
            | Error::ModelInconsistency(_)
            | Error::UndefinedStatistics(_)
            | Error::Integration(_) => 2,
        }
    }
}
