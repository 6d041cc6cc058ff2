//! Exact propagators for the pure-dephasing models. In the Jz eigenbasis the
//! frame-removed state evolves entrywise:
//!
//!   rho_mn(t) = rho_mn(0) exp(-i Delta(t) (m^2 - n^2)) exp(-gamma(t) (m - n)^2)
//!
//! with gamma(t) and Delta(t) from the bath module. Diagonal entries never
//! change; the phase factor is antisymmetric under m <-> n, so Hermiticity is
//! preserved exactly. For J = 1/2 the coupling 2 Jz = sigma_z reduces this to
//! the qubit map (off-diagonals times exp(-gamma), m^2 - n^2 = 0).

use num_complex::Complex64 as C64;

use crate::bath::{delta_phase, gamma, BathParams};
use crate::error::Error;
use crate::quantum::{ComplexMatrix, DensityMatrix, SpinJ};
use crate::Result;

/// Entrywise dephasing map with precomputed gamma(t) and Delta(t) values.
///
/// Separated from the propagators so sweeps and optimizers can evaluate the
/// bath integrals once per measurement interval.
pub fn dephasing_apply(
    rho0: &DensityMatrix,
    gamma_t: f64,
    delta_t: f64,
    j: SpinJ,
) -> Result<DensityMatrix> {
    if rho0.dim() != j.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state dim {} vs 2J+1 = {}",
            rho0.dim(),
            j.dim()
        )));
    }
    let dim = j.dim();
    let mapped = ComplexMatrix::from_fn(dim, |i, k| {
        let m = j.m_at(i);
        let n = j.m_at(k);
        let damp = (-gamma_t * (m - n) * (m - n)).exp();
        let phase = C64::new(0.0, -delta_t * (m * m - n * n)).exp();
        rho0.get(i, k) * damp * phase
    });
    DensityMatrix::new(mapped)
}

/// Frame-removed qubit dephasing: diagonal unchanged, off-diagonals damped by
/// exp(-gamma(t)); the Bloch map (nx, ny, nz) -> (e^-g nx, e^-g ny, nz).
pub fn dephasing_propagate_qubit(
    rho0: &DensityMatrix,
    t: f64,
    bath: &BathParams,
) -> Result<DensityMatrix> {
    if rho0.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "qubit propagator needs dim 2, got {}",
            rho0.dim()
        )));
    }
    let g = gamma(bath, t)?;
    dephasing_apply(rho0, g, 0.0, SpinJ::HALF)
}

/// Frame-removed large-spin dephasing propagator.
pub fn dephasing_propagate_large_spin(
    rho0: &DensityMatrix,
    t: f64,
    bath: &BathParams,
    j: SpinJ,
) -> Result<DensityMatrix> {
    let g = gamma(bath, t)?;
    let d = delta_phase(&bath.spectral, t)?;
    dephasing_apply(rho0, g, d, j)
}
