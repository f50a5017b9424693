use thiserror::Error;

/// Errors raised by state preparation, closed-form evaluation and the
/// operator-identity checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The adaptive cutoff reached its ceiling while the tail mass was still
    /// above the configured threshold.
    #[error("Fock cutoff exceeded: n_max = {n_max}, tail = {tail:e} > {eps_tail:e}")]
    CutoffExceeded { n_max: usize, tail: f64, eps_tail: f64 },

    #[error("degenerate denominator: |1 - 4 c1 c2| = {0:e}")]
    DegenerateDenominator(f64),

    #[error("arccosh argument {0} outside the real branch domain")]
    BranchDomain(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
