use thiserror::Error;

use crate::logic::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid circuit: {0}")]
    Circuit(String),

    #[error("invalid parameters: {0}")]
    Params(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("step {step}: {violation}")]
    Proof { step: usize, violation: Violation },

    #[error("extension definitions: {0}")]
    Extension(String),

    #[error("cannot normalize refutation: {0}")]
    Normalize(String),

    #[error("unclassifiable clause at stream position {0}")]
    UnclassifiableClause(u64),

    #[error("substitution: {0}")]
    Substitution(String),

    #[error("internal soundness failure: {0}")]
    InternalSoundness(String),

    #[error("certification failure: {0}")]
    Certification(String),

    #[error("count overflow: {0}")]
    Overflow(String),

    #[error("solver: {0}")]
    Solver(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// Short machine-readable tag used by the command-line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Circuit(_) => "circuit",
            Error::Params(_) => "params",
            Error::Parse { .. } => "parse",
            Error::Proof { .. } => "proof",
            Error::Extension(_) => "extension",
            Error::Normalize(_) => "normalize",
            Error::UnclassifiableClause(_) => "unclassifiable",
            Error::Substitution(_) => "substitution",
            Error::InternalSoundness(_) => "soundness",
            Error::Certification(_) => "certification",
            Error::Overflow(_) => "overflow",
            Error::Solver(_) => "solver",
            Error::Io(_) => "io",
        }
    }

    /// I/O and environment problems, as opposed to domain errors.
    pub fn is_environment(&self) -> bool {
        matches!(self, Error::Io(_) | Error::Solver(_))
    }
}
