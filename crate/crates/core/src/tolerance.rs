//! Centralized numerical tolerances.
//!
//! Every threshold used by validation logic and by the acceptance suite is
//! defined here, once. Code elsewhere takes a [`ToleranceConfig`] (or uses
//! [`ToleranceConfig::default`]) instead of inlining magic numbers.

/// All tolerances and caps used across the library.
///
/// The defaults are the contract the acceptance suite checks against; they
/// are chosen for `f64` arithmetic at total dimensions up to a few thousand.
#[derive(Debug, Clone, PartialEq)]
pub struct ToleranceConfig {
    /// Hermiticity bound for Hamiltonians, `max|H - H†|`.
    pub hermiticity_strict: f64,
    /// Hermiticity bound for density operators.
    pub hermiticity: f64,
    /// Allowed deviation of `‖ψ‖²` from 1 for state vectors, and of
    /// `tr ρ` from 1 for density operators.
    pub state_norm: f64,
    /// Density-operator eigenvalues must be ≥ `-eigenvalue_floor`.
    pub eigenvalue_floor: f64,
    /// Orthonormality / unitarity bound, `max|B†B - I|`.
    pub orthonormality: f64,
    /// Relative residual for decompositions: eigen/SVD residuals scaled by
    /// `‖M‖`, Schmidt reconstruction error, spectrum cross-checks.
    pub residual: f64,
    /// Two Schmidt weights `p_i`, `p_j` closer than this count as degenerate.
    pub degeneracy_gap: f64,
    /// Modulus threshold selecting the pivot component that fixes the phase
    /// of each Schmidt vector.
    pub phase_pivot: f64,
    /// Weights below this are dropped from entropy sums.
    pub entropy_weight_floor: f64,
    /// Norm drift over an evolution run beyond which states are renormalized
    /// (and the event logged).
    pub norm_drift: f64,
    /// Idempotence / trace-preservation bound for Zwanzig projectors.
    pub projector: f64,
    /// Largest admissible linear coefficient in the diagnostic small-time fit
    /// of `p₀(t)`.
    pub linear_term: f64,
    /// Default cap on truncation leakage of oscillator initial states.
    pub truncation_leakage: f64,
    /// Per-track alignment overlap below which a Schmidt-identity interchange
    /// is flagged.
    pub interchange_overlap: f64,
    /// Cap on the total dimension of tensor-product construction.
    pub max_dim: usize,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            hermiticity_strict: 1e-12,
            hermiticity: 1e-10,
            state_norm: 1e-10,
            eigenvalue_floor: 1e-10,
            orthonormality: 1e-10,
            residual: 1e-9,
            degeneracy_gap: 1e-9,
            phase_pivot: 1e-6,
            entropy_weight_floor: 1e-15,
            norm_drift: 1e-9,
            projector: 1e-10,
            linear_term: 1e-6,
            truncation_leakage: 1e-6,
            interchange_overlap: 0.5,
            max_dim: 4096,
        }
    }
}
