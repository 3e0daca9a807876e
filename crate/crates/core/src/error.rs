use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("invalid parameters for `{name}`: {reason}")]
    InvalidParams { name: String, reason: String },

    #[error("support radius {radius} exceeds L/4 = {limit} (periodization risk)")]
    SupportTooLarge { radius: f64, limit: f64 },

    #[error("window width {lambda} not resolvable on grid (need {min} <= lambda <= {max})")]
    WindowUnresolvable { lambda: f64, min: f64, max: f64 },

    #[error("phase-space grid too coarse: {0}")]
    TooCoarse(String),

    #[error("invalid ray sampling: {0}")]
    InvalidSampling(String),

    #[error("degenerate decay fit: {usable} usable radii, need at least {needed}")]
    DegenerateFit { usable: usize, needed: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid quadratic form: {0}")]
    InvalidHamiltonian(String),

    #[error("invalid Hermite basis: {0}")]
    InvalidBasis(String),

    #[error("malformed sample dump: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
