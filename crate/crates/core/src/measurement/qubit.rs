//! Closed-form qubit results: the optimal projector is the pure state whose
//! Bloch vector is parallel to the system's, giving s* = (1 + |n|)/2.

use crate::quantum::{bloch_from_density, BlochVector, DensityMatrix};
use crate::Result;

/// Degenerate-direction threshold below which the tie-break projector is
/// returned (a maximally mixed state has no preferred direction).
pub const DEGENERATE_NORM: f64 = 1e-12;

/// Optimal projector direction and survival for a qubit Bloch vector.
///
/// Returns (n / |n|, (1 + |n|)/2); for |n| below [`DEGENERATE_NORM`] every
/// projector ties at 1/2 and the caller-provided direction (conventionally
/// the initial-state projector) is returned instead.
pub fn optimal_qubit_bloch(n: &BlochVector, tie_break: &BlochVector) -> (BlochVector, f64) {
    let norm = n.norm();
    if norm < DEGENERATE_NORM {
        (*tie_break, 0.5)
    } else {
        (n.scale(1.0 / norm), 0.5 * (1.0 + norm))
    }
}

/// [`optimal_qubit_bloch`] applied to a 2x2 density matrix.
pub fn optimal_qubit(
    rho_tau: &DensityMatrix,
    tie_break: &BlochVector,
) -> Result<(BlochVector, f64)> {
    let n = bloch_from_density(rho_tau)?;
    Ok(optimal_qubit_bloch(&n, tie_break))
}

/// Survival when the initial pure state (unit Bloch vector n0) is measured
/// repeatedly under pure dephasing with exponent gamma:
/// (1 + nz0^2 + e^-gamma (nx0^2 + ny0^2)) / 2.
pub fn dephasing_survival_unopt(n0: &BlochVector, gamma_t: f64) -> f64 {
    let transverse = n0.x * n0.x + n0.y * n0.y;
    0.5 * (1.0 + n0.z * n0.z + (-gamma_t).exp() * transverse)
}

/// Optimal-measurement survival under pure dephasing:
/// (1 + sqrt(nz0^2 + e^-2 gamma (nx0^2 + ny0^2))) / 2. Always at least the
/// unoptimized value.
pub fn dephasing_survival_opt(n0: &BlochVector, gamma_t: f64) -> f64 {
    let transverse = n0.x * n0.x + n0.y * n0.y;
    let damp = (-gamma_t).exp();
    0.5 * (1.0 + (n0.z * n0.z + damp * damp * transverse).sqrt())
}
