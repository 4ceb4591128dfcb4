use thiserror::Error;

use crate::cli::expr::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A table would exceed the configured memory budget or the 32-bit entry range.
    #[error("resource limit: {0}")]
    Resource(String),

    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A grid or index range came out empty or out of bounds.
    #[error("range error: {0}")]
    Range(String),

    #[error("rule produced a non-finite value at p = {p}, nu = {nu}")]
    Evaluation { p: u64, nu: u32 },

    #[error("local sum at p = {p} does not converge")]
    Divergent { p: u64 },

    #[error("local factor at p = {p} nearly vanishes (|L_p| = {modulus:e})")]
    NearVanishingFactor { p: u64, modulus: f64 },

    #[error("degenerate variance: D_h(x; r) = 0")]
    DegenerateVariance,

    #[error("degenerate measure: M(x; r) = {0}")]
    DegenerateMeasure(f64),

    #[error("construction error: {0}")]
    Construction(String),

    #[error("table bound mismatch: need {needed}, have {have}")]
    BoundMismatch { needed: u64, have: u64 },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the runner: 1 usage/parse, 2 precondition, 3 resource.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Usage(_) | Error::Json(_) => 1,
            Error::Resource(_) | Error::Io(_) => 3,
            _ => 2,
        }
    }
}
