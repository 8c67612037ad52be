//! Centralized numerical tolerances.
//!
//! Every routine that needs a tolerance has a default taken from here and a
//! `*_with` / explicit-argument variant for callers that need something else.

/// Elementwise Hermiticity tolerance, `|m[i][j] - conj(m[j][i])|`.
pub const HERMITIAN: f64 = 1e-12;

/// Allowed deviation of a state's trace from 1.
pub const TRACE: f64 = 1e-12;

/// Jacobi stops once the off-diagonal Frobenius norm falls below this
/// (scaled by `max(1, ‖m‖_F)`).
pub const JACOBI_OFF_DIAGONAL: f64 = 1e-14;

/// Default tolerance for constraint residuals (`residual >= -tol` passes).
pub const VALIDITY: f64 = 1e-10;

/// Purity must be within this of 1 for a state to count as pure.
pub const PURITY: f64 = 1e-9;

/// A relative length within this of 1 counts as saturated.
pub const SATURATION: f64 = 1e-9;

/// Threshold on `|Tr(ρ ρ')|` below which two states are called orthogonal.
pub const ORTHOGONALITY: f64 = 1e-9;

/// Environment variable that overrides the CLI's default validity tolerance.
pub const ENV_TOLERANCE: &str = "QUTRIT_TOL";

/// Tolerances used by matrix-level entry points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub hermitian: f64,
    pub trace: f64,
    pub validity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: HERMITIAN,
            trace: TRACE,
            validity: VALIDITY,
        }
    }
}
