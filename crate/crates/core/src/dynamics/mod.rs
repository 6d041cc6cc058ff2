//! Time evolution of the system density matrix: exact pure-dephasing
//! propagators (qubit and large spin) and a time-local Redfield integrator
//! for the population-decay, spin-boson, and large-spin Hamiltonians.

mod dephasing;
mod redfield;

pub use dephasing::{dephasing_apply, dephasing_propagate_large_spin, dephasing_propagate_qubit};
pub use redfield::{redfield_integrate, redfield_kernel};

use crate::bath::BathParams;
use crate::error::Error;
use crate::quantum::{
    angular_momentum, evolve_unitary, pauli, ComplexMatrix, DensityMatrix, SpinJ,
};
use crate::Result;

/// Which system-environment model is being simulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// Two-level system exchanging excitations with the bath (F = sigma_x in
    /// the master equation, i.e. with the counter-rotating terms kept).
    PopulationDecay,
    /// Exactly solvable qubit dephasing (F = sigma_z).
    PureDephasingQubit,
    /// Qubit with both splitting and tunneling, F = sigma_z.
    SpinBoson,
    /// Large spin with Delta = 0; exactly solvable, F = 2 Jz.
    LargeSpinDephasing,
    /// Large spin with tunneling; integrated numerically, F = 2 Jz.
    LargeSpin,
}

impl ModelKind {
    pub fn is_large_spin(&self) -> bool {
        matches!(self, ModelKind::LargeSpinDephasing | ModelKind::LargeSpin)
    }

    /// Models whose dynamics are given in closed form rather than through the
    /// integrator.
    pub fn has_exact_dephasing(&self) -> bool {
        matches!(
            self,
            ModelKind::PureDephasingQubit | ModelKind::LargeSpinDephasing
        )
    }
}

/// A system-environment model with its Hamiltonian parameters and bath.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    /// Level splitting.
    pub epsilon: f64,
    /// Tunneling amplitude (0 where the model has none).
    pub delta: f64,
    pub j: SpinJ,
    pub bath: BathParams,
}

impl ModelSpec {
    pub fn new(
        kind: ModelKind,
        epsilon: f64,
        delta: f64,
        j: SpinJ,
        bath: BathParams,
    ) -> Result<Self> {
        if !kind.is_large_spin() && j != SpinJ::HALF {
            return Err(Error::InvalidArgument(format!(
                "{kind:?} requires J = 1/2, got J = {}",
                j.value()
            )));
        }
        let delta_free = matches!(
            kind,
            ModelKind::PopulationDecay
                | ModelKind::PureDephasingQubit
                | ModelKind::LargeSpinDephasing
        );
        if delta_free && delta != 0.0 {
            return Err(Error::InvalidArgument(format!(
                "{kind:?} has no tunneling term; delta must be 0, got {delta}"
            )));
        }
        Ok(Self {
            kind,
            epsilon,
            delta,
            j,
            bath,
        })
    }

    pub fn dim(&self) -> usize {
        self.j.dim()
    }

    /// System Hamiltonian: (epsilon/2) sigma_z + (delta/2) sigma_x for qubit
    /// models, epsilon Jz + delta Jx for large-spin models.
    pub fn hamiltonian(&self) -> ComplexMatrix {
        if self.kind.is_large_spin() {
            let (jx, _, jz) = angular_momentum(self.j);
            jz.scale_re(self.epsilon).add(&jx.scale_re(self.delta))
        } else {
            let (sx, _, sz) = pauli();
            sz.scale_re(0.5 * self.epsilon)
                .add(&sx.scale_re(0.5 * self.delta))
        }
    }

    /// System side F of the coupling F (x) B.
    pub fn coupling(&self) -> ComplexMatrix {
        match self.kind {
            ModelKind::PopulationDecay => pauli().0,
            ModelKind::PureDephasingQubit | ModelKind::SpinBoson => pauli().2,
            ModelKind::LargeSpinDephasing | ModelKind::LargeSpin => {
                let (_, _, jz) = angular_momentum(self.j);
                jz.scale_re(2.0)
            }
        }
    }

    /// Largest frequency the integrator step must resolve.
    pub fn max_frequency(&self) -> f64 {
        self.epsilon
            .abs()
            .max(self.delta.abs())
            .max(self.bath.spectral.omega_c)
    }
}

/// Lab-frame states on a uniform time grid starting at t = 0.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<DensityMatrix>,
    frame_removed: bool,
}

impl Trajectory {
    pub(crate) fn new(times: Vec<f64>, states: Vec<DensityMatrix>, frame_removed: bool) -> Self {
        debug_assert_eq!(times.len(), states.len());
        debug_assert!(!times.is_empty() && times[0] == 0.0);
        Self {
            times,
            states,
            frame_removed,
        }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn frame_removed(&self) -> bool {
        self.frame_removed
    }

    pub fn t_max(&self) -> f64 {
        *self.times.last().unwrap()
    }

    /// State at an arbitrary time in range: linear interpolation on matrix
    /// entries followed by re-Hermitization.
    pub fn interpolate(&self, tau: f64) -> Result<DensityMatrix> {
        if !(0.0..=self.t_max() + 1e-9).contains(&tau) {
            return Err(Error::TimeOutOfRange {
                t: tau,
                t_max: self.t_max(),
            });
        }
        let tau = tau.min(self.t_max());
        // Uniform grid; locate the bracketing pair directly.
        let dt = if self.times.len() > 1 {
            self.times[1] - self.times[0]
        } else {
            return Ok(self.states[0].clone());
        };
        let idx = ((tau / dt).floor() as usize).min(self.times.len() - 2);
        let t0 = self.times[idx];
        let w = ((tau - t0) / dt).clamp(0.0, 1.0);
        if w == 0.0 {
            return Ok(self.states[idx].clone());
        }
        let a = self.states[idx].matrix();
        let b = self.states[idx + 1].matrix();
        let mixed = a.scale_re(1.0 - w).add(&b.scale_re(w)).hermitize();
        DensityMatrix::new(mixed)
    }

    /// Largest |Tr rho - 1| over the stored states.
    pub fn max_trace_drift(&self) -> f64 {
        self.states
            .iter()
            .map(|s| (s.matrix().trace() - num_complex::Complex64::new(1.0, 0.0)).norm())
            .fold(0.0, f64::max)
    }
}

/// Interpolate the trajectory at tau and strip the free system evolution,
/// rho -> exp(+i H_S tau) rho exp(-i H_S tau), the rotation applied just
/// before a measurement.
pub fn frame_removed_state(
    model: &ModelSpec,
    traj: &Trajectory,
    tau: f64,
) -> Result<DensityMatrix> {
    let state = traj.interpolate(tau)?;
    if traj.frame_removed() {
        return Ok(state);
    }
    evolve_unitary(&state, &model.hamiltonian(), -tau)
}
