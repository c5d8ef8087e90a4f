//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by matrix validation, parameter checks, and solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// Input matrix deviates from Hermitian symmetry beyond tolerance.
    #[error("matrix is not Hermitian: deviation {deviation:.3e} exceeds {tolerance:.1e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    /// Input matrix has an eigenvalue below the negativity tolerance.
    #[error("matrix is not positive semi-definite: min eigenvalue {min_eigenvalue:.3e}")]
    NotPositiveSemiDefinite { min_eigenvalue: f64 },

    /// Input matrix deviates from skew-Hermitian symmetry beyond tolerance.
    #[error("matrix is not skew-Hermitian: deviation {deviation:.3e} exceeds {tolerance:.1e}")]
    NotSkewHermitian { deviation: f64, tolerance: f64 },

    /// Input matrix is not unitary within tolerance.
    #[error("matrix is not unitary: deviation {deviation:.3e} exceeds {tolerance:.1e}")]
    NotUnitary { deviation: f64, tolerance: f64 },

    /// Operands have incompatible dimensions.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A scalar parameter is outside its admissible range.
    #[error("invalid parameter {name}: {message}")]
    Parameter { name: &'static str, message: String },

    /// A structural validation failed (trace, normalization, projector law, ...).
    #[error("validation failed: {0}")]
    Validation(String),

    /// supp(rho) is not contained in supp(sigma) where the operation requires it.
    #[error("support violation: supp(rho) is not contained in supp(sigma)")]
    Support,

    /// The (alpha, z) pair lies outside every region covered by a closed form.
    #[error("(alpha, z) = ({alpha}, {z}) is outside the covered region; requires {required}")]
    UnsupportedRegion {
        alpha: f64,
        z: f64,
        required: &'static str,
    },

    /// A requested target value lies outside the attainable closed interval.
    #[error("target {target} outside attainable interval [{lo}, {hi}]")]
    TargetOutOfRange { target: f64, lo: f64, hi: f64 },

    /// A verification-suite configuration referenced an unknown check.
    #[error("unknown check id: {0}")]
    UnknownCheck(String),

    /// Bad configuration or malformed input file.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parameter(name: &'static str, message: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
