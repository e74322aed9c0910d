use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The group specification string or structure is malformed.
    #[error("invalid group spec: {0}")]
    Spec(String),

    /// A user-supplied multiplication table violates the group axioms.
    #[error("invalid group table: {0}")]
    Structure(String),

    #[error("elements belong to different groups")]
    GroupMismatch,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: String, found: String },

    /// A verification check did not pass; carries the worst residual.
    #[error("{what} failed: residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    Verification { what: String, residual: f64, tol: f64 },

    /// A computed quantity that should be (close to) an integer or
    /// well-separated was not.
    #[error("numeric quality: {0}")]
    NumericQuality(String),

    #[error("eigenvalue clustering could not be resolved with seed {seed}: {detail}; retry with a different --seed")]
    EigenClustering { seed: u64, detail: String },

    #[error("fewer independent columns than expected: wanted rank {expected}, found {found}")]
    RankDeficient { expected: usize, found: usize },

    #[error("w is a (non-zero) zero-divisor: coefficient {index} of the idempotent expansion vanishes")]
    ZeroDivisor { index: usize },

    #[error("matrix is not block diagonal under this transform: off-block residual {residual:.3e} exceeds {tol:.3e}")]
    OffBlock { residual: f64, tol: f64 },

    #[error("no built-in data for {0}")]
    NoBuiltin(String),

    #[error("internal consistency: {0}")]
    Internal(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn dimension(expected: impl ToString, found: impl ToString) -> Self {
        Error::Dimension {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
