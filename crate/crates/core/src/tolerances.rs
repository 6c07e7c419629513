//! Numerical tolerances used across the crate, collected in one place so the
//! validation thresholds stay consistent between modules.

/// Hermiticity check on inputs (eigensolver, density-matrix validation).
pub const HERMITIAN_TOL: f64 = 1e-10;

/// A density matrix is rejected when an eigenvalue falls below this.
pub const PSD_TOL: f64 = 1e-8;

/// Unit-trace check on density matrices.
pub const TRACE_TOL: f64 = 1e-10;

/// Kraus completeness: ‖Σ E†E − I‖_max must stay below this.
pub const CPTP_TOL: f64 = 1e-10;

/// A clamped measure (concurrence, negativity, violation margin) at or below
/// this value counts as zero when bracketing death times.
pub const ZERO_THRESHOLD: f64 = 1e-12;

/// Default bisection tolerance on death times, in time units.
pub const DEATH_TIME_TOL: f64 = 1e-8;

/// Eigensolver convergence: off-diagonal Frobenius mass relative to the
/// matrix scale.
pub const JACOBI_TOL: f64 = 1e-14;
