use thiserror::Error;

/// Errors raised across the wave, spectrum and series layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected cutoff {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("amplitude {amplitude} outside the small-amplitude validity window |a| <= {limit}")]
    Validity { amplitude: f64, limit: f64 },

    #[error("Newton iteration did not converge after {iterations} steps (last residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("singular dispersion symbol at n + mu = 0 (n = {n}, mu = {mu})")]
    Singularity { n: i64, mu: f64 },

    #[error("eigensolver failure: {0}")]
    Numeric(String),

    #[error("ill-conditioned critical basis: {0}")]
    Conditioning(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("series consistency failure: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
