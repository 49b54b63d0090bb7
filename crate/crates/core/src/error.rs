//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by parameter validation, eigenstate construction, the
/// numerical oracles and the text parsers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A physical parameter is out of its admissible range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        /// Name of the offending parameter.
        name: &'static str,
        /// Human readable explanation.
        reason: String,
    },

    /// The coupling geometry violates an invariant (ordering, origin, count).
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    /// The requested operation needs a specific number of coupling points.
    #[error("operation `{op}` requires {expected} coupling points, got {got}")]
    PointCount {
        /// Operation name.
        op: &'static str,
        /// Required number of coupling points.
        expected: usize,
        /// Number of coupling points supplied.
        got: usize,
    },

    /// The effective decay rate vanishes, so no two-photon bound state exists.
    #[error("no bound state at decoupling point (effective decay rate {gamma_real:e})")]
    NoBoundState {
        /// The offending effective decay rate.
        gamma_real: f64,
    },

    /// A text specification (grid, geometry, configuration) failed to parse.
    #[error("parse error: {0}")]
    Parse(String),

    /// A lattice run violated one of its validity guards.
    #[error("lattice run invalid: {0}")]
    Lattice(String),

    /// An adaptive or principal-value quadrature failed to converge.
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
