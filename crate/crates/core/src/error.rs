//! Error type shared by the whole engine.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("relation {index} is not parallel: paths have different endpoints")]
    InconsistentRelation { index: usize },

    #[error("relation {index} is malformed: {reason}")]
    MalformedRelation { index: usize, reason: String },

    #[error("presentation error: {0}")]
    BadPresentation(String),

    #[error("ideal not certified admissible: paths of length {max_len} do not all reduce to zero")]
    NotAdmissible { max_len: usize },

    #[error("algebra is not self-injective (vertex {vertex}: no projective has matching socle)")]
    NotSelfInjective { vertex: String },

    #[error("modules live over different algebras")]
    AlgebraMismatch,

    #[error("submodule witness does not belong to this module")]
    WitnessMismatch,

    #[error("operation undefined on the zero module")]
    ZeroModule,

    #[error("indecomposability could not be certified (splitting stalled)")]
    DecompositionInconclusive,

    #[error("member {0} is not a brick (stable endomorphism algebra is not a division ring)")]
    NotABrick(usize),

    #[error("members {0} and {1} are not stably orthogonal")]
    NotOrthogonal(usize, usize),

    #[error("cap exceeded after {steps} steps; verdict inconclusive")]
    CapExceeded { steps: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
