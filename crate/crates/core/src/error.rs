use thiserror::Error;

/// Error taxonomy shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    /// The amplitude in a denominator vanishes (engineered cancellation or an
    /// improbable transition). Reported explicitly, never masked as infinity.
    #[error("degenerate transition: {0}")]
    DegenerateTransition(String),

    #[error("lattice too large: {paths:.3e} paths exceeds cap {cap:.1e}")]
    TooLargeLattice { paths: f64, cap: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Probe orthogonal to the initial spin state: the linear response
    /// vanishes identically and the quadratic probe must be used instead.
    #[error("probe orthogonal to initial spin state; use the quadratic detection probability")]
    UseQuadraticProbe,
}

impl Error {
    /// Stable machine-readable tag, used by the CLI error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid-parameter",
            Error::UnsupportedConfiguration(_) => "unsupported-configuration",
            Error::DegenerateTransition(_) => "degenerate-transition",
            Error::TooLargeLattice { .. } => "too-large-lattice",
            Error::InvalidInput(_) => "invalid-input",
            Error::UseQuadraticProbe => "use-quadratic-probe",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid_param(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
