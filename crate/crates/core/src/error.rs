//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree {0} out of range (field order must stay below 2^16)")]
    DegreeTooLarge(u32),
    #[error("operands belong to different fields (GF({0}) vs GF({1}))")]
    FieldMismatch(u32, u32),
    #[error("division by zero")]
    DivideByZero,
    #[error("GF({0}) is not a subfield of GF({1})")]
    NotASubfield(u32, u32),
    #[error("the given elements do not form a basis over the subfield")]
    NotABasis,
    #[error("ambient dimensions do not match ({0} vs {1})")]
    AmbientMismatch(usize, usize),
    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("code has dimension zero")]
    EmptyCode,
    #[error("computation exceeds budget: {0}")]
    BudgetExceeded(String),
    #[error("index set must be nonempty and proper")]
    BadIndexSet,
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("right idealizer too large for subfield search ({0} elements)")]
    IdealizerTooLarge(u64),
    #[error("rank function is not integral; not a q-matroid")]
    NotAMatroid,
    #[error("rank {0} out of range for ground dimension {1}")]
    BadRank(usize, usize),
    #[error("invalid paving family: {0}")]
    BadFamily(String),
    #[error("loop-space dimension {0} out of range for n = {1}")]
    BadLoopDim(usize, usize),
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("q = {0} is not in the supported list")]
    UnsupportedQ(u32),
    #[error("m = {0} out of range (expected m >= 9)")]
    BadM(usize),
    #[error("subspaces are not pairwise disjoint")]
    NotDisjoint,
    #[error("polymatroids have different ground sizes ({0} vs {1})")]
    GroundMismatch(usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
