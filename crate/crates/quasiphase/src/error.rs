use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite input for `{0}`")]
    NonFinite(&'static str),

    #[error("coherent superposition has no terms")]
    EmptySuperposition,

    #[error("coherent amplitudes {0} and {1} coincide; superposition terms must be distinct")]
    DuplicateAmplitude(String, String),

    #[error("superposition is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch { left: Vec<usize>, right: Vec<usize> },

    #[error("imaginary residual {residual:e} exceeds {tolerance:e}; Hermitian closure is broken")]
    ImaginaryResidual { residual: f64, tolerance: f64 },

    #[error("grid axis is not uniformly spaced")]
    NonUniformGrid,

    #[error("unsupported kernel: {0}")]
    UnsupportedKernel(&'static str),

    #[error("state is not classical: {0}")]
    Nonclassical(&'static str),

    #[error(
        "table residual {residual:e} is too large for a valid decomposition (limit {limit:e})"
    )]
    NotRepresentable { residual: f64, limit: f64 },

    #[error("malformed grid spec `{0}`: {1}")]
    GridSpec(String, &'static str),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("malformed data file: {0}")]
    Format(String),
}

pub(crate) fn check_finite(name: &'static str, values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(name))
    }
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
