use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("arity mismatch for `{symbol}`: expected {expected}, got {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("word `{0}` needs a signature with exactly one binary symbol")]
    WordSugar(String),
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("no value for variable x{0}")]
    MissingVariable(u32),
    #[error("identity has {found} variables, limit is {limit}")]
    VariableLimit { found: usize, limit: usize },
    #[error("hypersubstitution: {0}")]
    InvalidHypersubstitution(String),
    #[error("signatures differ")]
    SignatureMismatch,
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("model search size {requested} exceeds guard {guard}")]
    ModelSizeGuard { requested: usize, guard: usize },
    #[error("free rank {requested} outside supported range {min}..={max}")]
    FreeRank {
        requested: usize,
        min: usize,
        max: usize,
    },
    #[error("algebra too large: {what} needs {needed}, bound is {bound}")]
    TooLarge {
        what: &'static str,
        needed: u128,
        bound: u128,
    },
    #[error("no exact free algebra for `{0}`: needs a band base or generating algebras")]
    NotLocallyFinite(String),
    #[error("cannot certify: {0}")]
    Undecided(String),
    #[error("unknown variety `{0}`")]
    UnknownVariety(String),
    #[error("{path}: {message}")]
    File { path: String, message: String },
}
