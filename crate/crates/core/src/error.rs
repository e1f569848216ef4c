use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("signature mismatch")]
    SignatureMismatch,

    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<usize>),

    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("repeated index {0}")]
    RepeatedIndex(usize),

    #[error("repeated argument {0}")]
    RepeatedArgument(f64),

    #[error("{what} exceeds brute-force bound ({value} > {bound})")]
    BoundExceeded {
        what: &'static str,
        value: usize,
        bound: usize,
    },

    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("part {part} has zero mass under the base measure")]
    ZeroMassPart { part: String },

    #[error("rejection sampling exceeded {0} iterations")]
    RejectionCapExceeded(usize),

    #[error("tie resampling exceeded {0} attempts; is the measure continuous?")]
    TieResampleExceeded(usize),

    #[error("probability {0} out of range [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("unknown structure `{0}`")]
    UnknownStructure(String),

    #[error("undersized sample: total {total} < required {required}")]
    UndersizedSample { total: u64, required: u64 },

    #[error("malformed index tuples: {0}")]
    MalformedTuples(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("symmetry violated: a{s:?} != a{t:?}")]
    SymmetryViolated { s: Vec<usize>, t: Vec<usize> },

    #[error("coefficient table is constant")]
    ConstantTable,

    #[error("exponent vector has total 0")]
    ZeroExponent,

    #[error("event not box-decomposable over the given parts: {0}")]
    NotBoxDecomposable(String),

    #[error("parse error: {0}")]
    Parse(String),
}
