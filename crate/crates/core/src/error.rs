use thiserror::Error;

/// Errors raised by the domain operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("operator is not self-adjoint (residual {residual:.3e})")]
    NotSelfAdjoint { residual: f64 },
    #[error("operator is not a projector (residual {residual:.3e})")]
    NotProjector { residual: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {0} exceeds the supported maximum of 64")]
    DimensionTooLarge(usize),
    #[error("generators do not commute")]
    NonCommutingGenerators,
    #[error("the generated algebra is the trivial algebra C·1")]
    TrivialAlgebra,
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("no seed contexts supplied")]
    EmptySeed,
    #[error("context poset would exceed {limit} contexts")]
    PosetTooLarge { limit: usize },
    #[error("unknown context `{0}`")]
    UnknownContext(String),
    #[error("context `{sub}` is not a subcontext of `{sup}`")]
    NotASubcontext { sub: String, sup: String },
    #[error("operator is not in the algebra of context `{context}` (residual {residual:.3e})")]
    NotInAlgebra { context: String, residual: f64 },
    #[error("character index {atom} out of range for context `{context}`")]
    UnknownCharacter { context: String, atom: usize },
    #[error("assignment does not cover every context of the poset")]
    IncompleteAssignment,
    #[error("sieves have different base contexts")]
    BaseMismatch,
    #[error("subobjects belong to different posets")]
    PosetMismatch,
    #[error("down-set of `{context}` has {size} contexts; sieve enumeration is capped at {limit}")]
    EnumerationTooLarge {
        context: String,
        size: usize,
        limit: usize,
    },
    #[error("state vector is not normalised (norm {norm})")]
    NotUnitVector { norm: f64 },
    #[error("global-section search exceeded the budget of {limit} nodes")]
    SearchBudgetExceeded { limit: u64 },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
