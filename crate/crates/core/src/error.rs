use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input data (system, pulse, grid, config).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An argument outside the domain of an operation, e.g. a time outside [0, T].
    #[error("domain error: {0}")]
    Domain(String),

    #[error("propagation diverged at step {step} (t = {time})")]
    PropagationDiverged { step: usize, time: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("circuit error: {0}")]
    Circuit(String),

    /// The requested simulation exceeds what the backend can hold in memory.
    #[error("resource limit: {0}")]
    Resource(String),

    #[error("trajectory comparison failed: {0}")]
    Comparison(String),

    #[error("state error: {0}")]
    State(String),

    #[error("evaluation of genome {genome} failed: {source}")]
    Evaluation {
        genome: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("generation {generation}: {source}")]
    Generation {
        generation: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Coarse classification used by front ends to pick an exit status.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidInput(_) | Error::Domain(_) | Error::Parse(_) | Error::Json(_) => {
                ErrorKind::Config
            }
            Error::Io(_) => ErrorKind::Config,
            Error::Resource(_) => ErrorKind::Resource,
            Error::Evaluation { source, .. } | Error::Generation { source, .. } => source.kind(),
            Error::Circuit(_) | Error::State(_) | Error::Comparison(_) => ErrorKind::Config,
            Error::PropagationDiverged { .. } | Error::Numerical(_) => ErrorKind::Numerical,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Numerical,
    Resource,
}
