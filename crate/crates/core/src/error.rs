use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied parameter is outside its admissible range.
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    /// A function was evaluated outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Structurally invalid input data (grids, heights, profiles, snapshots).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The exhaustive path oracle would have to enumerate too many paths.
    #[error("path enumeration refused: {count} paths exceed the cap of {cap}")]
    PathCap { count: u128, cap: u128 },

    /// A finite simulation window was not wide enough for the requested horizon.
    #[error("light-cone margin violated: {0}")]
    MarginViolated(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }
}

/// Checks `0 < r <= 1` for a slow-bond rate.
pub(crate) fn check_rate(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 && r <= 1.0 {
        Ok(())
    } else {
        Err(Error::param("r", format!("slow rate must lie in (0, 1], got {r}")))
    }
}
