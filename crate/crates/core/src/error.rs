use thiserror::Error;

use crate::graph::Vertex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(Vertex, Vertex),

    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),

    #[error("graph has {n} vertices, at most {max} are supported")]
    TooManyVertices { n: usize, max: usize },

    #[error("dense representation limited to {cap} qubits, got {n}")]
    DenseCapExceeded { n: usize, cap: usize },

    #[error("LC orbit enumeration limited to {cap} vertices, got {n}")]
    OrbitCapExceeded { n: usize, cap: usize },

    #[error("search limited to {cap} nonparticipants, got {k}")]
    NonparticipantCapExceeded { k: usize, cap: usize },

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("vertex {0} has already been removed from the graph state")]
    VertexNotPresent(Vertex),

    #[error("outcome {outcome} of the {basis} measurement on vertex {vertex} has probability zero")]
    ZeroProbabilityOutcome {
        vertex: Vertex,
        basis: char,
        outcome: u8,
    },

    #[error("state is not normalised (norm^2 = {0})")]
    NotNormalised(f64),

    #[error("invalid extraction task: {0}")]
    InvalidTask(String),

    #[error("no plan found: {0}")]
    NoPlan(String),

    #[error("insufficient coverage: {0}")]
    InsufficientCoverage(String),

    #[error("round batch is empty")]
    EmptyBatch,

    #[error("value {0} is not a probability")]
    InvalidProbability(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("missing measurement setting: {0}")]
    MissingSetting(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Process exit codes for command-line use.
pub mod exit_code {
    pub const OK: i32 = 0;
    pub const IO: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const NO_PLAN: i32 = 3;
    pub const MISSING_SETTING: i32 = 4;
    pub const CAP_EXCEEDED: i32 = 5;
    pub const INVALID_INPUT: i32 = 6;
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        use exit_code::*;
        match self {
            Error::Io(_) => IO,
            Error::Parse { .. } | Error::Config(_) | Error::Json(_) => PARSE,
            Error::NoPlan(_) => NO_PLAN,
            Error::MissingSetting(_) | Error::InsufficientCoverage(_) => MISSING_SETTING,
            Error::TooManyVertices { .. }
            | Error::DenseCapExceeded { .. }
            | Error::OrbitCapExceeded { .. }
            | Error::NonparticipantCapExceeded { .. } => CAP_EXCEEDED,
            _ => INVALID_INPUT,
        }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
