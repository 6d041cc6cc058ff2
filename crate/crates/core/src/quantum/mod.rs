//! Dense complex linear algebra, spin operators, Bloch-sphere conversions,
//! and SU(2) coherent states: the shared substrate for all models.

mod bloch;
mod density;
mod matrix;
mod spin;

pub use bloch::BlochVector;
pub use density::{bloch_from_density, density_from_bloch, evolve_unitary, DensityMatrix};
pub use matrix::{ComplexMatrix, HermitianEigen};
pub use spin::{angular_momentum, coherent_state, pauli, state_overlap, CoherentStateSpec, SpinJ};

pub use num_complex::Complex64 as C64;
