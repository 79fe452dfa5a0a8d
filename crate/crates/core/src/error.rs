use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The density at the query point is below the node floor, so any
    /// quantity that divides by it is undefined.
    #[error("density node at x = {x:e} m, z = {z:e} m, t = {t:e} s (density {density:e})")]
    Node { x: f64, z: f64, t: f64, density: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The measurement does not apply to the given profile (e.g. no fringes).
    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{aborted} of {total} trajectories hit a density node (limit is 1%)")]
    TooManyAborts { aborted: usize, total: usize },

    #[error("profile binning mismatch: {0}")]
    BinningMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
