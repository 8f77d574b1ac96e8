use thiserror::Error;

/// Errors produced by thermoprobe operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: `{field}` {reason}")]
    InvalidConfig { field: &'static str, reason: String },

    #[error("{what} = {value} is outside its domain: {reason}")]
    OutOfDomain {
        what: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The measured flux does not yield a positive, finite conductivity.
    #[error("inadmissible flux measurement {flux}: no positive estimate exists beyond the asymptote q̄_M = {asymptote}")]
    Inadmissible { flux: f64, asymptote: f64 },

    #[error("flux {flux} reaches the elasticity asymptote q̄_M = {asymptote}")]
    AsymptoteExceeded { flux: f64, asymptote: f64 },

    /// Source and ambient temperatures coincide, so no heat flows and the
    /// conductivity cannot be identified.
    #[error("source temperature equals ambient temperature; the inverse problem is degenerate")]
    DegenerateDrive,

    #[error("unknown material `{0}`")]
    UnknownMaterial(String),

    #[error("materials file, line {line}: {message}")]
    MaterialParse { line: u64, message: String },

    #[error("materials file, line {line}: material `{symbol}` {reason}")]
    MaterialValidation {
        line: u64,
        symbol: String,
        reason: String,
    },

    #[error("experiment produced no admissible rows to summarize")]
    EmptySummary,

    #[error("could not draw an admissible measurement after {attempts} attempts (ε = {epsilon})")]
    NoAdmissibleDraw { attempts: usize, epsilon: f64 },

    #[error("tridiagonal system is singular at row {row}")]
    SingularSystem { row: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
