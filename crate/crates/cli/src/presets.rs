//! Frozen figure-reproduction presets. The parameters here are the contract
//! the manifest golden test pins down; any change is a deliberate,
//! test-visible event.

use std::path::PathBuf;

use zeno_core::dynamics::ModelKind;
use zeno_core::measurement::InitialState;
use zeno_core::quantum::BlochVector;

use crate::config::ExperimentConfig;

pub const PRESET_NAMES: &[&str] = &[
    "fig1", "fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b", "fig5a", "fig5b", "fig5c",
    "fig5d", "fig6a", "fig6b",
];

fn base(model: ModelKind, name: &str) -> ExperimentConfig {
    ExperimentConfig {
        model,
        epsilon: 1.0,
        delta: 0.0,
        j: 0.5,
        g: 0.01,
        s_ohmic: 1.0,
        omega_c: 10.0,
        beta: 1.0,
        initial: InitialState::Angles {
            theta: std::f64::consts::FRAC_PI_2,
            phi: 0.0,
        },
        tau_min: 0.05,
        tau_max: 5.0,
        tau_steps: 100,
        dt: 0.01,
        grid: 64,
        out: PathBuf::from(format!("{name}.csv")),
    }
}

/// Qubit dephasing bath common to the fig2/fig3 presets.
fn dephasing(name: &str, initial: BlochVector) -> ExperimentConfig {
    ExperimentConfig {
        g: 0.1,
        omega_c: 10.0,
        beta: 0.5,
        initial: InitialState::Bloch(initial),
        ..base(ModelKind::PureDephasingQubit, name)
    }
}

/// Spin-boson presets share omega_c = 10 and the low-temperature convention
/// beta = 100 / epsilon.
fn spin_boson(name: &str, epsilon: f64, delta: f64, g: f64, s_ohmic: f64) -> ExperimentConfig {
    ExperimentConfig {
        epsilon,
        delta,
        g,
        s_ohmic,
        beta: 100.0 / epsilon,
        tau_min: 0.05,
        tau_max: 8.0,
        tau_steps: 100,
        dt: 0.01,
        ..base(ModelKind::SpinBoson, name)
    }
}

fn large_spin(name: &str, kind: ModelKind, delta: f64) -> ExperimentConfig {
    ExperimentConfig {
        j: 1.0,
        delta,
        g: 0.01,
        omega_c: 50.0,
        beta: 1.0,
        tau_min: 0.02,
        tau_max: 3.0,
        tau_steps: 100,
        dt: 0.002,
        ..base(kind, name)
    }
}

/// Preset lookup; `None` for an unknown name.
pub fn preset(name: &str) -> Option<ExperimentConfig> {
    let sqrt3 = 3.0f64.sqrt();
    let cfg = match name {
        // Population decay, G = 0.01, omega_c = 50, epsilon = 1, excited
        // initial state; tau range covers the flip at tau* ~ 10.6.
        "fig1" => ExperimentConfig {
            g: 0.01,
            omega_c: 50.0,
            beta: 100.0,
            initial: InitialState::Bloch(BlochVector::new(0.0, 0.0, 1.0)),
            tau_min: 0.05,
            tau_max: 20.0,
            tau_steps: 80,
            dt: 0.002,
            ..base(ModelKind::PopulationDecay, "fig1")
        },
        // Qubit dephasing, G = 0.1, omega_c = 10, beta = 0.5.
        "fig2a" => dephasing("fig2a", BlochVector::new(1.0, 0.0, 0.0)),
        "fig2b" => dephasing(
            "fig2b",
            BlochVector::new(1.0 / sqrt3, 1.0 / sqrt3, 1.0 / sqrt3),
        ),
        "fig3a" | "fig3b" => dephasing(
            name,
            BlochVector::new(1.0 / 10.0f64.sqrt(), 0.0, (9.0f64 / 10.0).sqrt()),
        ),
        // Spin-boson, equatorial initial state; (a) short and (b) long
        // measurement-interval windows of the same parameters.
        "fig4a" => ExperimentConfig {
            tau_max: 2.0,
            tau_steps: 60,
            ..spin_boson("fig4a", 2.0, 2.0, 0.01, 1.0)
        },
        "fig4b" => spin_boson("fig4b", 2.0, 2.0, 0.01, 1.0),
        // Spectral-density and weight variants of fig4.
        "fig5a" => spin_boson("fig5a", 2.0, 2.0, 0.01, 0.8),
        "fig5b" => spin_boson("fig5b", 2.0, 2.0, 0.01, 2.0),
        "fig5c" => spin_boson("fig5c", 6.0, 2.0, 0.025, 1.0),
        "fig5d" => spin_boson("fig5d", 2.0, 6.0, 0.025, 1.0),
        // Large spin J = 1 without and with tunneling.
        "fig6a" => large_spin("fig6a", ModelKind::LargeSpinDephasing, 0.0),
        "fig6b" => large_spin("fig6b", ModelKind::LargeSpin, 1.0),
        _ => return None,
    };
    Some(cfg)
}
