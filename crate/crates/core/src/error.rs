use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invariant violated in `{field}`: {message}")]
    Invariant { field: String, message: String },
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("simplex exceeded the iteration limit of {0}")]
    IterationLimit(usize),
    #[error("configuration LP needs more than {cap} columns")]
    ConfigExplosion { cap: usize },
    #[error("configuration LP is infeasible: {0}")]
    InfeasibleClp(String),
    #[error("machine {machine} cannot process job {job}")]
    InvalidAssignment { machine: usize, job: usize },
    #[error("lp mode `planted` requires a planted witness")]
    NoPlantedWitness,
    #[error("instance carries no planted witness")]
    MissingWitness,
    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),
    #[error("{0}")]
    Mismatch(String),
}

impl Error {
    pub(crate) fn invariant(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Invariant {
            field: field.into(),
            message: message.into(),
        }
    }
}
