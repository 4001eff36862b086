use thiserror::Error;

/// Every failure the library can report. Variants carry the measured
/// deviation so callers can tell how far outside tolerance an input was.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is empty or has non-finite entries")]
    NonFinite,

    #[error("not Hermitian: max |H - H^dag| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("not positive semidefinite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace is not one: |tr - 1| = {deviation:e}")]
    TraceNotOne { deviation: f64 },

    #[error("state vector is not normalized: |norm - 1| = {deviation:e}")]
    NotNormalized { deviation: f64 },

    #[error("not unitary: max |U^dag U - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("not an isometry: max |V^dag V - I| = {deviation:e}")]
    NotIsometry { deviation: f64 },

    #[error("channel is not trace preserving: max |sum K^dag K - I| = {deviation:e}")]
    NotTracePreserving { deviation: f64 },

    #[error("rank deficient: smallest singular value {smallest:e}")]
    RankDeficient { smallest: f64 },

    #[error("requested rank {rank} is outside 1..={dim}")]
    BadRank { rank: usize, dim: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coefficient vector norm {norm} exceeds one")]
    CoefficientNorm { norm: f64 },

    #[error("contraction infeasible: largest singular value {largest} exceeds one")]
    ContractionInfeasible { largest: f64 },

    #[error("inconsistent interference pattern: pi-sample deviates by {deviation:e}")]
    InconsistentPattern { deviation: f64 },

    #[error("empty Kraus list")]
    EmptyKraus,

    #[error("malformed document: {0}")]
    Malformed(String),

    #[error("unsupported schema_version {0:?}")]
    UnsupportedVersion(String),

    #[error("unknown document kind {0:?}")]
    UnknownKind(String),

    #[error("expected a {expected} document, found {found}")]
    WrongKind { expected: String, found: String },

    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
