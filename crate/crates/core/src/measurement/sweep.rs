//! Sweep orchestration: one row per measurement interval with unoptimized and
//! optimized survivals, decay rates, and the optimal projector angles.
//!
//! Exactly solvable models (pure dephasing, large-spin dephasing) evaluate
//! the closed-form propagator per interval; the remaining models integrate a
//! single trajectory to the largest interval and reuse it across the grid,
//! since re-preparation restarts every interval from the initial state.

use rayon::prelude::*;

use super::coherent::{coherent_projection, optimize_coherent_projector};
use super::qubit::{dephasing_survival_opt, dephasing_survival_unopt, optimal_qubit_bloch};
use super::{decay_rate, ProjectorChoice};
use crate::bath::{delta_phase, gamma};
use crate::dynamics::{
    dephasing_apply, frame_removed_state, redfield_integrate, ModelKind, ModelSpec,
};
use crate::error::Error;
use crate::quantum::{
    bloch_from_density, coherent_state, density_from_bloch, BlochVector, CoherentStateSpec,
    DensityMatrix, SpinJ,
};
use crate::tol;
use crate::Result;

/// Initial pure state of a sweep: a unit Bloch vector (qubit models) or
/// sphere angles. For qubit models the angles are the standard state
/// cos(t/2)|up> + e^(i p) sin(t/2)|down>; for large-spin models they label
/// the SU(2) coherent state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    Bloch(BlochVector),
    Angles { theta: f64, phi: f64 },
}

impl InitialState {
    /// Unit Bloch vector for qubit models.
    pub fn qubit_bloch(&self) -> Result<BlochVector> {
        let n = match self {
            InitialState::Bloch(n) => *n,
            InitialState::Angles { theta, phi } => BlochVector::from_angles(*theta, *phi),
        };
        if (n.norm() - 1.0).abs() > tol::STRUCTURAL {
            return Err(Error::InvalidArgument(format!(
                "initial state must be pure: |n| = {} is not 1",
                n.norm()
            )));
        }
        Ok(n)
    }

    /// Coherent-state label for large-spin models; a raw Bloch vector has no
    /// large-spin meaning and is rejected.
    pub fn coherent_spec(&self, j: SpinJ) -> Result<CoherentStateSpec> {
        match self {
            InitialState::Angles { theta, phi } => CoherentStateSpec::new(j, *theta, *phi),
            InitialState::Bloch(_) => Err(Error::InvalidArgument(
                "large-spin models take an initial state as (theta, phi), not a Bloch vector"
                    .into(),
            )),
        }
    }

    /// Initial density matrix for the given model.
    pub fn density(&self, model: &ModelSpec) -> Result<DensityMatrix> {
        if model.kind.is_large_spin() {
            let spec = self.coherent_spec(model.j)?;
            DensityMatrix::from_state_vector(&coherent_state(&spec))
        } else {
            density_from_bloch(&self.qubit_bloch()?)
        }
    }
}

/// One sweep row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementOutcome {
    pub tau: f64,
    pub s_unopt: f64,
    pub s_opt: f64,
    pub gamma_unopt: f64,
    pub gamma_opt: f64,
    pub theta_opt: f64,
    pub phi_opt: f64,
}

/// Sweep output: outcomes ordered by tau plus any diagnostics collected along
/// the way (positivity breaches and the like).
#[derive(Debug, Clone)]
pub struct DecaySweep {
    pub model: ModelSpec,
    pub initial: InitialState,
    pub outcomes: Vec<MeasurementOutcome>,
    pub warnings: Vec<String>,
}

fn validate_taus(taus: &[f64]) -> Result<()> {
    if taus.is_empty() {
        return Err(Error::InvalidArgument("empty tau grid".into()));
    }
    if taus[0] <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tau grid must be positive; first entry {}",
            taus[0]
        )));
    }
    if taus.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "tau grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

fn validate_choice(model: &ModelSpec, choice: ProjectorChoice) -> Result<()> {
    match choice {
        ProjectorChoice::OptimalQubit if model.kind.is_large_spin() => Err(Error::InvalidArgument(
            "OptimalQubit projector choice requires a dim-2 model".into(),
        )),
        ProjectorChoice::OptimalCoherent { .. } if !model.kind.is_large_spin() => {
            Err(Error::InvalidArgument(
                "OptimalCoherent projector choice requires a large-spin model".into(),
            ))
        }
        _ => Ok(()),
    }
}

fn outcome(
    tau: f64,
    s_unopt: f64,
    s_opt: f64,
    theta_opt: f64,
    phi_opt: f64,
) -> Result<MeasurementOutcome> {
    debug_assert!(s_opt >= s_unopt - tol::DOMINANCE);
    Ok(MeasurementOutcome {
        tau,
        s_unopt,
        s_opt,
        gamma_unopt: decay_rate(s_unopt, tau).map_err(|e| e.at_tau(tau))?,
        gamma_opt: decay_rate(s_opt, tau).map_err(|e| e.at_tau(tau))?,
        theta_opt,
        phi_opt,
    })
}

/// Run a decay-rate sweep over the measurement intervals `taus`.
///
/// `dt` overrides the integrator step for the models that need one; the
/// default is 0.1 / max(epsilon, delta, omega_c).
pub fn sweep(
    model: &ModelSpec,
    initial: &InitialState,
    taus: &[f64],
    choice: ProjectorChoice,
    dt: Option<f64>,
) -> Result<DecaySweep> {
    validate_taus(taus)?;
    validate_choice(model, choice)?;

    let (outcomes, warnings) = match model.kind {
        ModelKind::PureDephasingQubit => dephasing_qubit_sweep(model, initial, taus, choice)?,
        ModelKind::LargeSpinDephasing => dephasing_large_spin_sweep(model, initial, taus, choice)?,
        ModelKind::PopulationDecay | ModelKind::SpinBoson | ModelKind::LargeSpin => {
            integrator_sweep(model, initial, taus, choice, dt)?
        }
    };

    Ok(DecaySweep {
        model: *model,
        initial: *initial,
        outcomes,
        warnings,
    })
}

fn dephasing_qubit_sweep(
    model: &ModelSpec,
    initial: &InitialState,
    taus: &[f64],
    choice: ProjectorChoice,
) -> Result<(Vec<MeasurementOutcome>, Vec<String>)> {
    let n0 = initial.qubit_bloch()?;
    let (theta0, phi0) = n0.to_angles();
    let outcomes = taus
        .par_iter()
        .map(|&tau| {
            let g = gamma(&model.bath, tau).map_err(|e| e.at_tau(tau))?;
            let s_unopt = dephasing_survival_unopt(&n0, g);
            match choice {
                ProjectorChoice::InitialState => outcome(tau, s_unopt, s_unopt, theta0, phi0),
                ProjectorChoice::OptimalQubit => {
                    let damp = (-g).exp();
                    let n_tau = BlochVector::new(damp * n0.x, damp * n0.y, n0.z);
                    let (n_opt, s_opt) = optimal_qubit_bloch(&n_tau, &n0);
                    debug_assert!((s_opt - dephasing_survival_opt(&n0, g)).abs() < 1e-12);
                    let (theta, phi) = n_opt.to_angles();
                    outcome(tau, s_unopt, s_opt, theta, phi)
                }
                ProjectorChoice::OptimalCoherent { .. } => unreachable!("validated above"),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((outcomes, Vec::new()))
}

fn dephasing_large_spin_sweep(
    model: &ModelSpec,
    initial: &InitialState,
    taus: &[f64],
    choice: ProjectorChoice,
) -> Result<(Vec<MeasurementOutcome>, Vec<String>)> {
    let eta = initial.coherent_spec(model.j)?;
    let rho0 = DensityMatrix::from_state_vector(&coherent_state(&eta))?;
    let outcomes = taus
        .par_iter()
        .map(|&tau| {
            let g = gamma(&model.bath, tau).map_err(|e| e.at_tau(tau))?;
            let d = delta_phase(&model.bath.spectral, tau).map_err(|e| e.at_tau(tau))?;
            let rho_tau = dephasing_apply(&rho0, g, d, model.j).map_err(|e| e.at_tau(tau))?;
            let s_unopt = coherent_projection(&rho_tau, &eta).map_err(|e| e.at_tau(tau))?;
            match choice {
                ProjectorChoice::InitialState => outcome(tau, s_unopt, s_unopt, eta.theta, eta.phi),
                ProjectorChoice::OptimalCoherent { grid } => {
                    let opt =
                        optimize_coherent_projector(&rho_tau, model.j, (eta.theta, eta.phi), grid)
                            .map_err(|e| e.at_tau(tau))?;
                    outcome(tau, s_unopt, opt.survival.max(s_unopt), opt.theta, opt.phi)
                }
                ProjectorChoice::OptimalQubit => unreachable!("validated above"),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((outcomes, Vec::new()))
}

fn integrator_sweep(
    model: &ModelSpec,
    initial: &InitialState,
    taus: &[f64],
    choice: ProjectorChoice,
    dt: Option<f64>,
) -> Result<(Vec<MeasurementOutcome>, Vec<String>)> {
    let rho0 = initial.density(model)?;
    let dt = dt.unwrap_or(0.1 / model.max_frequency());
    let t_max = *taus.last().unwrap();
    let traj = redfield_integrate(model, &rho0, t_max, dt)?;

    let mut warnings = Vec::new();
    let drift = traj.max_trace_drift();
    if drift > tol::TRACE_DRIFT {
        warnings.push(format!(
            "trace drift {drift:.3e} exceeds {:.1e} over the run",
            tol::TRACE_DRIFT
        ));
    }

    // Large-spin sweeps need the coherent label; qubit ones the Bloch vector.
    let eta = model
        .kind
        .is_large_spin()
        .then(|| initial.coherent_spec(model.j))
        .transpose()?;
    let n0 = (!model.kind.is_large_spin())
        .then(|| initial.qubit_bloch())
        .transpose()?;

    let rows = taus
        .par_iter()
        .map(|&tau| {
            let rho_tau = frame_removed_state(model, &traj, tau).map_err(|e| e.at_tau(tau))?;
            let min_eig = rho_tau.min_eigenvalue().map_err(|e| e.at_tau(tau))?;
            let warning = (min_eig < -tol::POSITIVITY_WARN)
                .then(|| format!("positivity: min eigenvalue {min_eig:.3e} at tau = {tau}"));

            let row = if let Some(eta) = eta {
                let s_unopt = coherent_projection(&rho_tau, &eta).map_err(|e| e.at_tau(tau))?;
                match choice {
                    ProjectorChoice::InitialState => {
                        outcome(tau, s_unopt, s_unopt, eta.theta, eta.phi)?
                    }
                    ProjectorChoice::OptimalCoherent { grid } => {
                        let opt = optimize_coherent_projector(
                            &rho_tau,
                            model.j,
                            (eta.theta, eta.phi),
                            grid,
                        )
                        .map_err(|e| e.at_tau(tau))?;
                        outcome(tau, s_unopt, opt.survival.max(s_unopt), opt.theta, opt.phi)?
                    }
                    ProjectorChoice::OptimalQubit => unreachable!("validated above"),
                }
            } else {
                let n0 = n0.unwrap();
                let n_tau = bloch_from_density(&rho_tau).map_err(|e| e.at_tau(tau))?;
                let s_unopt = (0.5 * (1.0 + n_tau.dot(&n0))).clamp(0.0, 1.0);
                match choice {
                    ProjectorChoice::InitialState => {
                        let (theta, phi) = n0.to_angles();
                        outcome(tau, s_unopt, s_unopt, theta, phi)?
                    }
                    ProjectorChoice::OptimalQubit => {
                        let (n_opt, s_opt) = optimal_qubit_bloch(&n_tau, &n0);
                        let (theta, phi) = n_opt.to_angles();
                        // Out-of-regime states (flagged above) can push the
                        // Bloch norm past 1; survivals stay probabilities.
                        outcome(tau, s_unopt, s_opt.clamp(0.0, 1.0).max(s_unopt), theta, phi)?
                    }
                    ProjectorChoice::OptimalCoherent { .. } => unreachable!("validated above"),
                }
            };
            Ok((row, warning))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut outcomes = Vec::with_capacity(rows.len());
    for (row, warning) in rows {
        outcomes.push(row);
        if let Some(w) = warning {
            warnings.push(w);
        }
    }
    Ok((outcomes, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::{BathParams, SpectralDensity};

    fn fig2_bath() -> BathParams {
        BathParams::new(SpectralDensity::new(0.1, 1.0, 10.0).unwrap(), 0.5).unwrap()
    }

    fn taus(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
        (0..steps)
            .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
            .collect()
    }

    #[test]
    fn rejects_bad_grids_and_choices() {
        let model = ModelSpec::new(
            ModelKind::PureDephasingQubit,
            1.0,
            0.0,
            SpinJ::HALF,
            fig2_bath(),
        )
        .unwrap();
        let init = InitialState::Bloch(BlochVector::new(1.0, 0.0, 0.0));
        assert!(sweep(&model, &init, &[], ProjectorChoice::OptimalQubit, None).is_err());
        assert!(sweep(
            &model,
            &init,
            &[0.0, 1.0],
            ProjectorChoice::OptimalQubit,
            None
        )
        .is_err());
        assert!(sweep(
            &model,
            &init,
            &[1.0, 1.0],
            ProjectorChoice::OptimalQubit,
            None
        )
        .is_err());
        assert!(sweep(
            &model,
            &init,
            &[0.5, 1.0],
            ProjectorChoice::OptimalCoherent { grid: 16 },
            None
        )
        .is_err());
    }

    #[test]
    fn equatorial_dephasing_curves_identical() {
        let model = ModelSpec::new(
            ModelKind::PureDephasingQubit,
            1.0,
            0.0,
            SpinJ::HALF,
            fig2_bath(),
        )
        .unwrap();
        let init = InitialState::Bloch(BlochVector::new(1.0, 0.0, 0.0));
        let result = sweep(
            &model,
            &init,
            &taus(0.05, 5.0, 40),
            ProjectorChoice::OptimalQubit,
            None,
        )
        .unwrap();
        for row in &result.outcomes {
            assert!((row.gamma_opt - row.gamma_unopt).abs() < 1e-10);
        }
    }

    #[test]
    fn out_of_regime_run_reports_positivity_warnings() {
        // G = 0.1 with omega_c = 50 is outside the weak-coupling regime for
        // the population-decay kernel; the run must complete but flag the
        // negative eigenvalues it produces.
        let bath = BathParams::new(SpectralDensity::new(0.1, 1.0, 50.0).unwrap(), 100.0).unwrap();
        let model =
            ModelSpec::new(ModelKind::PopulationDecay, 1.0, 0.0, SpinJ::HALF, bath).unwrap();
        let init = InitialState::Angles {
            theta: 1.2,
            phi: 0.3,
        };
        let result = sweep(
            &model,
            &init,
            &[1.0, 3.0, 4.0],
            ProjectorChoice::OptimalQubit,
            Some(0.002),
        )
        .unwrap();
        assert!(
            !result.warnings.is_empty(),
            "expected positivity diagnostics"
        );
        assert!(result.warnings.iter().any(|w| w.contains("positivity")));
        assert!(result.warnings.iter().any(|w| w.contains("tau")));
    }

    #[test]
    fn zeno_limit_small_interval() {
        let model = ModelSpec::new(
            ModelKind::PureDephasingQubit,
            1.0,
            0.0,
            SpinJ::HALF,
            fig2_bath(),
        )
        .unwrap();
        let init = InitialState::Angles {
            theta: 1.0,
            phi: 0.5,
        };
        let result = sweep(
            &model,
            &init,
            &[1e-3, 1e-2],
            ProjectorChoice::OptimalQubit,
            None,
        )
        .unwrap();
        let first = &result.outcomes[0];
        assert!(first.s_unopt > 0.999 && first.s_opt > 0.999);
        assert!((first.gamma_opt - first.gamma_unopt).abs() < 1e-4);
    }

    #[test]
    fn dominance_and_consistency_across_models() {
        let j1 = SpinJ::try_from_f64(1.0).unwrap();
        let ls_bath = BathParams::new(SpectralDensity::new(0.01, 1.0, 50.0).unwrap(), 1.0).unwrap();
        let cases: Vec<(ModelSpec, InitialState, ProjectorChoice)> = vec![
            (
                ModelSpec::new(
                    ModelKind::PureDephasingQubit,
                    1.0,
                    0.0,
                    SpinJ::HALF,
                    fig2_bath(),
                )
                .unwrap(),
                InitialState::Bloch(BlochVector::new(
                    1.0 / 3.0f64.sqrt(),
                    1.0 / 3.0f64.sqrt(),
                    1.0 / 3.0f64.sqrt(),
                )),
                ProjectorChoice::OptimalQubit,
            ),
            (
                ModelSpec::new(ModelKind::SpinBoson, 2.0, 2.0, SpinJ::HALF, fig2_bath()).unwrap(),
                InitialState::Angles {
                    theta: std::f64::consts::FRAC_PI_2,
                    phi: 0.0,
                },
                ProjectorChoice::OptimalQubit,
            ),
            (
                ModelSpec::new(ModelKind::LargeSpinDephasing, 1.0, 0.0, j1, ls_bath).unwrap(),
                InitialState::Angles {
                    theta: std::f64::consts::FRAC_PI_2,
                    phi: 0.0,
                },
                ProjectorChoice::OptimalCoherent { grid: 24 },
            ),
        ];
        for (model, init, choice) in cases {
            let result = sweep(&model, &init, &taus(0.1, 2.0, 12), choice, None).unwrap();
            assert_eq!(result.outcomes.len(), 12);
            for row in &result.outcomes {
                assert!(
                    row.s_opt >= row.s_unopt - 1e-12,
                    "{:?}: dominance violated at tau {}",
                    model.kind,
                    row.tau
                );
                assert!((0.0..=1.0).contains(&row.s_unopt));
                // Gamma consistency with the stored survival.
                assert!(
                    ((-row.gamma_opt * row.tau).exp() - row.s_opt).abs() < 1e-12,
                    "consistency at tau {}",
                    row.tau
                );
            }
        }
    }

    #[test]
    fn population_decay_optimal_beats_baseline_after_flip() {
        let bath = BathParams::new(SpectralDensity::new(0.05, 1.0, 50.0).unwrap(), 100.0).unwrap();
        let model =
            ModelSpec::new(ModelKind::PopulationDecay, 1.0, 0.0, SpinJ::HALF, bath).unwrap();
        let init = InitialState::Bloch(BlochVector::new(0.0, 0.0, 1.0));
        // G = 0.05 flips around tau ~ 2.1, so this grid straddles it.
        let result = sweep(
            &model,
            &init,
            &taus(0.5, 4.0, 15),
            ProjectorChoice::OptimalQubit,
            None,
        )
        .unwrap();
        let last = result.outcomes.last().unwrap();
        assert!(last.gamma_opt < last.gamma_unopt);
        // Optimal projector has flipped to the south pole.
        assert!(last.theta_opt > 3.0);
    }
}
