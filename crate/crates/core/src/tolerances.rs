//! Numerical thresholds shared across the crate.

/// Maximum entrywise `|M - M†|` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Maximum `|tr ρ - 1|` accepted for a density matrix.
pub const TRACE_TOL: f64 = 1e-10;

/// Eigenvalues down to `-PSD_TOL` are round-off and get clamped to zero;
/// anything more negative is an invalid state.
pub const PSD_TOL: f64 = 1e-10;

/// Jacobi iteration stops once the off-diagonal Frobenius norm drops below
/// this (scaled by the matrix norm when that exceeds one).
pub const JACOBI_OFF_DIAG_TOL: f64 = 1e-14;

/// Hard cap on Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// A state counts as pure when `tr ρ² >= 1 - PURITY_TOL`.
pub const PURITY_TOL: f64 = 1e-8;

/// X-state detection: entries outside the diagonal and anti-diagonal must be
/// below this in modulus.
pub const X_STATE_TOL: f64 = 1e-10;

/// Slack on the binary entropy domain `[0, 1]`.
pub const BINARY_ENTROPY_DOMAIN_TOL: f64 = 1e-12;

/// Post-selection with success probability at or below this is degenerate.
pub const DEGENERATE_PROBABILITY: f64 = 1e-15;

/// An improvement in EOF or entropy must exceed this to count.
pub const IMPROVEMENT_TOL: f64 = 1e-12;

/// Default number of η grid points in a sweep.
pub const DEFAULT_GRID_POINTS: usize = 512;

/// Golden-section refinement stops once the bracket is narrower than this.
pub const GOLDEN_TOL: f64 = 1e-6;

/// Coordinate descent stops once a full cycle improves EOF by less than this.
pub const DESCENT_TOL: f64 = 1e-9;
