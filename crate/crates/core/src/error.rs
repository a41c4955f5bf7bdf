use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("generator X{index} at position {pos} is out of range (d = {d})")]
    GeneratorOutOfRange { index: u64, d: usize, pos: usize },

    #[error("empty word has no cyclic canonical form")]
    EmptyWord,

    #[error("generator counts differ: {left} vs {right}")]
    GeneratorCountMismatch { left: usize, right: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is ill-conditioned (condition number {cond:.3e} exceeds cap {cap:.3e})")]
    IllConditioned { cond: f64, cap: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("polynomial is not pure-scalar")]
    NotPureScalar,

    #[error("polynomial has a constant term")]
    ConstantTerm,

    #[error("tuple is not irreducible (word span dimension {span} < {full})")]
    Reducible { span: usize, full: usize },

    #[error("search failed: {0}")]
    SearchFailed(String),

    #[error("numerical rank is unstable: {0}")]
    UnstableRank(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
