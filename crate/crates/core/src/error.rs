use thiserror::Error;

/// Characteristic coefficient that failed to vanish on a supposedly nilpotent matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficient {
    Trace,
    Sigma2,
    Det,
}

impl std::fmt::Display for Coefficient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Coefficient::Trace => "tr",
            Coefficient::Sigma2 => "sigma2",
            Coefficient::Det => "det",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported matrix size {0} (expected 2 or 3)")]
    UnsupportedSize(usize),
    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("matrix size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("operation needs a {expected}x{expected} matrix, got {got}x{got}")]
    WrongSize { expected: usize, got: usize },
    #[error("empty product")]
    EmptyProduct,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix {index} is not nilpotent: {coefficient} = {value}")]
    NotNilpotent {
        index: usize,
        coefficient: Coefficient,
        value: String,
    },
    #[error("letter {letter} out of range 1..={d}")]
    LetterOutOfRange { letter: usize, d: usize },
    #[error("empty trace word")]
    EmptyWord,
    #[error("invalid word {0:?}: expected digits 1-9")]
    InvalidWord(String),
    #[error("not a permutation of 1..={0}")]
    InvalidPermutation(usize),
    #[error("tuple lengths differ: {0} vs {1}")]
    TupleLength(usize, usize),
    #[error(
        "set {set} expects {expected_d} matrices of size {expected_size}, got {d} of size {size}"
    )]
    Incompatible {
        set: String,
        expected_d: usize,
        expected_size: usize,
        d: usize,
        size: usize,
    },
    #[error("unknown invariant set {0:?}")]
    UnknownSet(String),
    #[error("unknown template {0:?}")]
    UnknownTemplate(String),
    #[error("malformed witness record {id}: {reason}")]
    MalformedRecord { id: String, reason: String },
    #[error("sampling degenerate: rank {first} at {n} samples, {second} at {tripled}; retry with another seed")]
    Sampling {
        first: usize,
        second: usize,
        n: usize,
        tripled: usize,
    },
    #[error("too few samples: {got} < {needed}")]
    TooFewSamples { got: usize, needed: usize },
    #[error("word length bound {0} out of range 1..=8")]
    LengthBound(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
