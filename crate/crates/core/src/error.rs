use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabError {
    #[error("unknown point `{point}` in space `{space}`")]
    UnknownPoint { point: String, space: String },
    #[error("space `{0}` carries no {1}")]
    MissingStructure(String, &'static str),
    #[error("structure kind mismatch: {0}")]
    KindMismatch(String),
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("map is not structure-preserving: {0}")]
    NotStructurePreserving(String),
    #[error("domain/codomain mismatch: {0}")]
    Mismatch(String),
    #[error("ill-formed monad element: {0}")]
    IllFormed(String),
    #[error("normalization violated: {0}")]
    Normalization(String),
    #[error("monad `{monad}` does not support {what}")]
    Unsupported { monad: String, what: String },
    #[error("{0} is not representable as a finite space")]
    NotRepresentable(String),
    #[error("stage bound {bound} exceeded (needed {needed})")]
    StageBound { bound: usize, needed: usize },
    #[error("enumeration limit exceeded: {0}")]
    TooLarge(String),
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("type error: {0}")]
    Type(String),
    #[error("{0}")]
    Precondition(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
