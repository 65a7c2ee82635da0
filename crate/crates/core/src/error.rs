use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mirror index ({i}, {j}) outside the {n}x{n} array")]
    IndexOutOfBounds { i: usize, j: usize, n: usize },

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("mirror normal {0:?} has cos(beta) = 0; orientation angles undefined")]
    GimbalDegenerate([f64; 3]),

    #[error("reflected ray does not intersect the source plane")]
    NoIntersection,

    #[error("singular distance: {0}")]
    SingularDistance(String),

    #[error("monte carlo needs at least {min} bits, got {got}")]
    InsufficientTrials { got: u64, min: u64 },

    #[error("invalid {key}: {reason}")]
    Validation { key: String, reason: String },

    #[error("{path}: {reason}")]
    Schema { path: String, reason: String },

    #[error("no crossover: {0}")]
    NotFound(String),

    #[error("target BER {target:e} unreachable: BER at the {floor} m search floor is {ber:e}")]
    Unreachable { target: f64, floor: f64, ber: f64 },

    #[error("bracketing failed: {0}")]
    Bracketing(String),
}

impl Error {
    pub(crate) fn validation(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation { key: key.into(), reason: reason.into() }
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::DegenerateGeometry(msg.into())
    }

    /// Geometry failures, as opposed to configuration or solver failures.
    pub fn is_geometry(&self) -> bool {
        matches!(
            self,
            Error::IndexOutOfBounds { .. }
                | Error::DegenerateGeometry(_)
                | Error::GimbalDegenerate(_)
                | Error::NoIntersection
                | Error::SingularDistance(_)
        )
    }
}
