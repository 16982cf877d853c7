use thiserror::Error;

/// Errors produced by dataset construction, estimation, and inference.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("insufficient observations: need at least {required}, have {available} ({context})")]
    InsufficientObservations {
        required: usize,
        available: usize,
        context: String,
    },

    #[error("regressor matrix is rank deficient (condition number {condition:.3e} exceeds {limit:.1e}) at horizon {horizon}")]
    RankDeficient {
        condition: f64,
        limit: f64,
        horizon: usize,
    },

    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    #[error("matrix is not positive semi-definite: eigenvalue {eigenvalue:.3e} below tolerance")]
    NotPositiveSemiDefinite { eigenvalue: f64 },

    #[error("weak instrument: |sample cov(z, s)| = {gamma:.3e} is below the guard {guard:.3e}")]
    WeakInstrument { gamma: f64, guard: f64 },

    #[error("estimation failed: {0}")]
    Estimation(String),

    #[error("{0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
