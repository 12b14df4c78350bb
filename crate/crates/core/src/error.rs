use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |m - m^dagger| = {deviation:e} exceeds {tol:e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("unknown mode `{0}`")]
    UnknownMode(String),

    #[error("duplicate mode label `{0}`")]
    DuplicateMode(String),

    #[error("invalid mode label `{0}`: labels must be non-empty and alphanumeric")]
    InvalidLabel(String),

    #[error("system has {modes} modes, limit is {limit}")]
    SystemTooLarge { modes: usize, limit: usize },

    #[error("mode system must contain at least one mode")]
    EmptySystem,

    #[error("invalid mode subset: {0}")]
    InvalidSubset(String),

    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),

    #[error("ordering {0:?} does not place every kept mode before every traced mode")]
    NonPhysicalOrdering(Vec<String>),

    #[error("PPT criterion is only conclusive for 2x2 and 2x3 systems, got effective dimensions {kept}x{traced}")]
    UnsupportedDimensions { kept: usize, traced: usize },

    #[error("malformed separable decomposition: {0}")]
    MalformedDecomposition(String),

    #[error("invalid density operator: {0}")]
    InvalidDensity(String),

    #[error("state is the zero vector and cannot be normalized")]
    ZeroVector,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
