use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("space mismatch")]
    SpaceMismatch,

    #[error("operation requires a symplectic space")]
    NotSymplectic,

    #[error("slot {slot} out of range for degree {degree}")]
    SlotOutOfRange { slot: usize, degree: usize },

    #[error("tensor is not invariant under the cyclic shift")]
    NotCyclicInvariant,

    #[error("vector {index} is not contained in the ambient subspace")]
    NotInSubspace { index: usize },

    #[error("highest-weight label has {len} rows but the rank is only {rank}")]
    LabelTooLong { len: usize, rank: usize },

    #[error("modular ranks disagree: {rank_a} mod {prime_a} vs {rank_b} mod {prime_b}")]
    RankDisagreement {
        prime_a: u64,
        rank_a: usize,
        prime_b: u64,
        rank_b: usize,
    },

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("parameter out of range: {0}")]
    BadParameter(String),

    #[error("cache entry is malformed: {0}")]
    MalformedCache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
