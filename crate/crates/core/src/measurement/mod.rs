//! Survival probabilities, optimal projectors, effective decay rates, and
//! decay-rate sweeps over measurement intervals.

mod coherent;
mod qubit;
mod sweep;

pub use coherent::{
    coherent_projection, coherent_survival, optimize_coherent_dephasing,
    optimize_coherent_projector, CoherentOptimum,
};
pub use qubit::{
    dephasing_survival_opt, dephasing_survival_unopt, optimal_qubit, optimal_qubit_bloch,
    DEGENERATE_NORM,
};
pub use sweep::{sweep, DecaySweep, InitialState, MeasurementOutcome};

use num_complex::Complex64 as C64;

use crate::dynamics::{ModelKind, ModelSpec, Trajectory};
use crate::error::Error;
use crate::quantum::{bloch_from_density, DensityMatrix};
use crate::tol;
use crate::Result;

/// Which projector maximization a sweep performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectorChoice {
    /// Repeatedly project onto the initial state (the unoptimized baseline).
    InitialState,
    /// Closed-form qubit optimum (dim-2 models only).
    OptimalQubit,
    /// Numerical optimum over SU(2) coherent projectors with the given grid
    /// density (large-spin models only).
    OptimalCoherent { grid: usize },
}

/// Survival probability Tr(|chi><chi| rho) for a unit-norm projector state.
pub fn survival(rho_tau: &DensityMatrix, projector_state: &[C64]) -> Result<f64> {
    if projector_state.len() != rho_tau.dim() {
        return Err(Error::DimensionMismatch(format!(
            "projector dim {} vs state dim {}",
            projector_state.len(),
            rho_tau.dim()
        )));
    }
    let norm_sqr: f64 = projector_state.iter().map(|a| a.norm_sqr()).sum();
    if (norm_sqr - 1.0).abs() > tol::STRUCTURAL {
        return Err(Error::InvalidArgument(format!(
            "projector state norm^2 = {norm_sqr} is not 1"
        )));
    }
    let mut s = 0.0;
    for i in 0..projector_state.len() {
        for k in 0..projector_state.len() {
            s += (projector_state[i].conj() * rho_tau.get(i, k) * projector_state[k]).re;
        }
    }
    Ok(s.clamp(0.0, 1.0))
}

/// Effective decay rate Gamma = -ln(s) / tau; s = 1 gives exactly 0, s = 0 is
/// reported as an infinite-rate sentinel.
pub fn decay_rate(s: f64, tau: f64) -> Result<f64> {
    if !tau.is_finite() || tau <= 0.0 {
        return Err(Error::InvalidArgument(format!("tau = {tau} must be > 0")));
    }
    if !(0.0..=1.0 + 1e-12).contains(&s) {
        return Err(Error::InvalidArgument(format!(
            "survival s = {s} outside [0, 1]"
        )));
    }
    if s == 0.0 {
        return Ok(f64::INFINITY);
    }
    if s >= 1.0 {
        return Ok(0.0);
    }
    Ok(-s.ln() / tau)
}

/// Survival after N repeated measurements, s^N = exp(-Gamma N tau).
pub fn survival_after_n(s: f64, n: u32) -> f64 {
    s.powi(n as i32)
}

/// Result of scanning a population-decay trajectory for the Bloch-vector
/// flip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FlipTime {
    /// n_z crosses zero at this time (resolved to 1e-3).
    Found(f64),
    /// No sign change in the covered range; the final n_z is reported.
    NotFound { final_nz: f64 },
}

/// Locate the time at which the population-decay Bloch vector flips
/// direction (n_z = 0), by sign-change scan plus bisection on interpolated
/// states.
pub fn flip_time(model: &ModelSpec, traj: &Trajectory) -> Result<FlipTime> {
    if model.kind != ModelKind::PopulationDecay {
        return Err(Error::InvalidArgument(format!(
            "flip time is defined for the population decay model, got {:?}",
            model.kind
        )));
    }
    let nz_at = |t: f64| -> Result<f64> { Ok(bloch_from_density(&traj.interpolate(t)?)?.z) };

    let times = traj.times();
    let mut prev_t = times[0];
    let mut prev_nz = nz_at(prev_t)?;
    let mut bracket = None;
    for &t in &times[1..] {
        let nz = nz_at(t)?;
        if prev_nz > 0.0 && nz <= 0.0 {
            bracket = Some((prev_t, t));
            break;
        }
        prev_t = t;
        prev_nz = nz;
    }
    let Some((mut lo, mut hi)) = bracket else {
        return Ok(FlipTime::NotFound { final_nz: prev_nz });
    };
    while hi - lo > 1e-3 {
        let mid = 0.5 * (lo + hi);
        if nz_at(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(FlipTime::Found(0.5 * (lo + hi)))
}

/// Measurement intervals at which a centered finite difference of Gamma(tau)
/// changes sign: candidate Zeno/anti-Zeno transitions (Gamma rising = Zeno,
/// falling = anti-Zeno).
pub fn transition_candidates(taus: &[f64], gammas: &[f64]) -> Vec<f64> {
    assert_eq!(taus.len(), gammas.len());
    let n = taus.len();
    if n < 3 {
        return Vec::new();
    }
    let slope: Vec<f64> = (1..n - 1)
        .map(|i| (gammas[i + 1] - gammas[i - 1]) / (taus[i + 1] - taus[i - 1]))
        .collect();
    let mut out = Vec::new();
    for i in 1..slope.len() {
        if slope[i - 1] != 0.0 && slope[i] != 0.0 && slope[i - 1].signum() != slope[i].signum() {
            out.push(taus[i + 1]);
        }
    }
    out
}
