use thiserror::Error;

/// Errors produced by the operator and spectrum routines.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("matrix is not Hermitian: max |M - M†| = {deviation:.3e} (dim {dim})")]
    NotHermitian { deviation: f64, dim: usize },

    #[error("operator bases do not match: {left} vs {right} (dims {left_dim} x {right_dim})")]
    BasisMismatch {
        left: String,
        right: String,
        left_dim: usize,
        right_dim: usize,
    },

    #[error(
        "composite dimension {dim} exceeds the cap {cap}; lower the Fock cutoff or raise the cap"
    )]
    DimensionCap { dim: usize, cap: usize },

    #[error(
        "grid too small: state {state} has boundary amplitude {amplitude:.3e} of its maximum \
         (limit 1e-6); suggested extent [{suggested_min:.3}, {suggested_max:.3}]"
    )]
    GridTooSmall {
        state: usize,
        amplitude: f64,
        suggested_min: f64,
        suggested_max: f64,
    },

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },
}

impl CoreError {
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        CoreError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CoreError>;
