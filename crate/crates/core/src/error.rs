//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("tensor product dimension {dim} exceeds configured cap {cap}")]
    DimensionOverflow { dim: usize, cap: usize },

    #[error("matrix not Hermitian: max|M - M†| = {deviation:.3e} > {tolerance:.3e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("state not normalized: |‖ψ‖² - 1| = {deviation:.3e} > {tolerance:.3e}")]
    NotNormalized { deviation: f64, tolerance: f64 },

    #[error("density operator invalid: {reason}")]
    InvalidDensity { reason: String },

    #[error("basis columns not orthonormal: max|B†B - I| = {deviation:.3e}")]
    NonOrthonormalBasis { deviation: f64 },

    #[error("{algorithm} failed to converge within {sweeps} sweeps")]
    ConvergenceFailure {
        algorithm: &'static str,
        sweeps: usize,
    },

    #[error(
        "Schmidt spectrum degenerate: min weight gap {min_gap:.3e} ≤ {threshold:.3e}; \
         rate equations are singular here, fall back to SVD tracking"
    )]
    DegenerateSpectrum { min_gap: f64, threshold: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("fit window holds only {samples} samples (need ≥ {required})")]
    WindowTooShort { samples: usize, required: usize },

    #[error(
        "diagnostic fit found a linear term {coefficient:.3e} in p₀(t), above {tolerance:.3e}"
    )]
    LinearTermDetected { coefficient: f64, tolerance: f64 },

    #[error("truncation leakage {leakage:.3e} of state '{label}' exceeds {threshold:.3e}")]
    TruncationLeakage {
        label: String,
        leakage: f64,
        threshold: f64,
    },

    #[error("numerical invariant violated in {context}: {detail}")]
    NumericalInvariant {
        context: &'static str,
        detail: String,
    },
}
