//! Numerical laboratory for open-system dynamics of small discrete quantum
//! systems: density matrices evolved under Kraus channels and Lindblad
//! master equations, entanglement and Bell-nonlocality functionals evaluated
//! along the trajectory, and finite death times located by bracketing and
//! bisection.
//!
//! The crate is organized around seven modules:
//!
//! - [`tensor`] — dense complex linear algebra (Kronecker products, partial
//!   trace/transpose, Hermitian eigensolver, PSD square root, expm)
//! - [`states`] — validated density-matrix factories for the state families
//!   under study
//! - [`channels`] — Kraus channels, CPTP verification, composition
//! - [`evolution`] — Lindblad and unitary dynamics, cavity Hamiltonians
//! - [`measures`] — purity, fidelity, concurrence, negativity and friends
//! - [`nonlocality`] — CHSH / WWZB / Svetlichny operators and angle search
//! - [`sudden_death`] — trajectory sweeps, death-time detection, revivals,
//!   closed-form reference times
//!
//! All operations are pure functions of their inputs; values are immutable
//! once constructed and safe to share across threads.

pub mod channels;
pub mod evolution;
pub mod measures;
pub mod nonlocality;
pub mod random;
pub mod states;
pub mod sudden_death;
pub mod tensor;
pub mod tolerances;

pub use tensor::{ComplexMatrix, DimList};

use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("matrix is not Hermitian (max deviation {dev:.3e})")]
    NotHermitian { dev: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eig:.3e})")]
    NotPsd { min_eig: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("not a valid density matrix: {0}")]
    InvalidState(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
