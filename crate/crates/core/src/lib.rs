//! Core library for simulating repeated projective measurements on small open
//! quantum systems and optimizing the measured projector.
//!
//! The crate is organized around four layers:
//!
//! - [`quantum`]: dense complex matrices, Hermitian eigendecomposition,
//!   Bloch-sphere conversions, spin operators, and SU(2) coherent states.
//! - [`bath`]: Ohmic-family spectral densities and the bath integrals
//!   `gamma(t)`, `delta_phase(t)`, and the correlation function `C(t)`.
//! - [`dynamics`]: exact dephasing propagators and a time-local Redfield
//!   integrator for the population-decay, spin-boson, and large-spin models.
//! - [`measurement`]: survival probabilities, optimal projectors (closed form
//!   for qubits, numerical over SU(2) coherent states for large spins),
//!   effective decay rates, and sweep orchestration.

pub mod bath;
pub mod dynamics;
pub mod error;
pub mod measurement;
pub mod quantum;
pub mod tol;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
