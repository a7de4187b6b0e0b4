use thiserror::Error;

/// Errors raised by the algebra, linear-algebra and I/O layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: String, right: String },

    #[error("rank mismatch: d={left} vs d={right}")]
    RankMismatch { left: usize, right: usize },

    #[error("derivation needs a paired alphabet of even size, got {0}")]
    OddAlphabet(usize),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed commutator: {0}")]
    MalformedCommutator(String),

    #[error("element is not in the commutator ideal: {0}")]
    NotInCommutatorIdeal(String),

    #[error("module element is not the image of a commutator; residual sum v_i f_i = {residual}")]
    NotAnImage { residual: String },

    #[error("relation side conditions violated: {0}")]
    SideCondition(String),

    #[error("generator is not a constant: {name}; its derivative is {derivative}")]
    NotConstant { name: String, derivative: String },

    #[error("generator is not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("kind mismatch: {0}")]
    KindMismatch(String),

    #[error("parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },

    #[error("schema violation at {pointer}: {message}")]
    Schema { pointer: String, message: String },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
