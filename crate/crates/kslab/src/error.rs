//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide error enum. Variants map onto the CLI exit codes: domain,
/// geometry and input errors are usage problems (exit 2), resource limits
/// exit 3, numeric/contract failures exit 4.
#[derive(Debug, Error)]
pub enum KsError {
    /// A parameter is outside its mathematical domain (e.g. a wedge angle
    /// outside (0, pi), or a comb gap with eps >= 1/4).
    #[error("domain error: {0}")]
    Domain(String),

    /// The geometry cannot be used by the requested operation (open curve
    /// passed to the Cauchy assembler, degenerate polygon, ...).
    #[error("unsupported geometry: {0}")]
    Geometry(String),

    /// Malformed caller input (non-partition masks, missing derivative
    /// samples, unknown spec keys, ...).
    #[error("input error: {0}")]
    Input(String),

    /// A configured resource budget was exceeded (mesh node cap).
    #[error("resource limit: {0}")]
    Resource(String),

    /// A numeric routine failed to converge or produced non-finite values.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// A documented operation contract was violated by the supplied data
    /// (non-skew matrix passed to the skew eigensolver, non-idempotent
    /// projection, ...).
    #[error("contract violation: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, KsError>;
