use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("undefined ratio: the trivial group has count zero")]
    UndefinedRatio,

    #[error("singular least-squares fit")]
    SingularFit,

    #[error("markov chain did not reach the mixing criterion within {0} steps")]
    MixingTimeout(u64),

    #[error("refusing to enumerate: {0}")]
    ResourceGuard(String),

    #[error("could not factor {0}")]
    Factorization(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag for CLI error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::UndefinedRatio => "undefined-ratio",
            Error::SingularFit => "singular-fit",
            Error::MixingTimeout(_) => "mixing-timeout",
            Error::ResourceGuard(_) => "resource-guard",
            Error::Factorization(_) => "factorization",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
