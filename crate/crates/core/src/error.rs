use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument `{arg}`: {reason}")]
    InvalidArgument { arg: &'static str, reason: String },

    #[error("incompatible grids: {0}")]
    GridMismatch(String),

    #[error("unknown fiducial `{0}`")]
    UnknownFiducial(String),

    #[error("empty family of fiducial operators")]
    EmptyFamily,

    #[error("empty basis for {0}")]
    EmptyBasis(&'static str),

    /// The group integral of a field against the Haar measure does not
    /// converge at the edge of the scale axis. Carries the per-level
    /// contributions, ordered by ascending scale.
    #[error("divergent Haar integral at the {edge} end of the scale axis (partial sums {partial_sums:?})")]
    DivergentHaarIntegral {
        edge: &'static str,
        partial_sums: Vec<f64>,
    },

    #[error("mass {index} does not carry a nucleus: {reason}")]
    NucleusViolation { index: usize, reason: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(arg: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            arg,
            reason: reason.into(),
        }
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument { .. } => "invalid_argument",
            Error::GridMismatch(_) => "grid_mismatch",
            Error::UnknownFiducial(_) => "unknown_fiducial",
            Error::EmptyFamily => "empty_family",
            Error::EmptyBasis(_) => "empty_basis",
            Error::DivergentHaarIntegral { .. } => "divergent_haar_integral",
            Error::NucleusViolation { .. } => "nucleus_violation",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }

    /// True for failures of a numerical contract (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::DivergentHaarIntegral { .. })
    }
}
