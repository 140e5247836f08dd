use thiserror::Error;

/// Errors raised by the simulation toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty domain")]
    EmptyDomain,
    #[error("self-loop at vertex {0}")]
    SelfLoop(i64),
    #[error("vertex {vertex} outside [{lo}, {hi})")]
    VertexOutOfDomain { vertex: i64, lo: i64, hi: i64 },
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(i64, i64),
    #[error("interval [{inner_lo}, {inner_hi}) not contained in [{outer_lo}, {outer_hi})")]
    NotContained {
        inner_lo: i64,
        inner_hi: i64,
        outer_lo: i64,
        outer_hi: i64,
    },
    #[error("incompatible vertex sets")]
    IncompatibleVertices,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("enumeration limit: {pairs} pairs exceeds {limit}")]
    EnumerationLimit { pairs: usize, limit: usize },
    #[error("overlapping vertex sets at vertex {0}")]
    OverlappingSets(i64),
    #[error("subcritical exponent: 2*gamma = {two_gamma} <= alpha = {alpha}")]
    SubcriticalExponent { two_gamma: f64, alpha: f64 },
    #[error("zero-probability condition")]
    ZeroProbabilityCondition,
    #[error("pair universe mismatch")]
    UniverseMismatch,
    #[error("edge probabilities not ordered at pair {i}-{j}: {lo} > {hi}")]
    NotOrdered { i: i64, j: i64, lo: f64, hi: f64 },
    #[error(
        "grid too narrow: proxy rate {first} at beta {beta_first}, {last} at beta {beta_last}"
    )]
    GridTooNarrow {
        beta_first: f64,
        first: f64,
        beta_last: f64,
        last: f64,
    },
    #[error("unknown proxy '{0}'")]
    UnknownProxy(String),
    #[error("infeasible scale: {0}")]
    InfeasibleScale(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
