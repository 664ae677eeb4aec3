use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when building scenarios or evaluating them.
#[derive(Debug, Error)]
pub enum Error {
    /// A scalar or structural input was outside its documented domain.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// An elevation angle left the vertical-pattern domain of [-90, 90] degrees.
    #[error("elevation angle {angle_deg} deg is outside [-90, 90] deg")]
    InvalidAngle { angle_deg: f64 },

    /// A link degenerated (receiver coincides with the transmit antenna).
    #[error("degenerate link geometry: {0}")]
    InvalidGeometry(String),

    /// A statistic was requested over an empty collection.
    #[error("empty field: {0}")]
    EmptyField(&'static str),

    /// Exhaustive search would exceed the enumeration budget.
    #[error("exhaustive search needs {combinations} combinations (limit {limit})")]
    CombinationOverflow { combinations: u128, limit: u128 },
}

impl Error {
    /// Shorthand used throughout the crate for parameter violations.
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
