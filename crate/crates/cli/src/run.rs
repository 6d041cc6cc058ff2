//! Command implementations: sweeps to CSV + manifest, the flip-time report,
//! and the bath self-test.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use zeno_core::bath::{closed_form, correlation, delta_phase, gamma, BathParams, SpectralDensity};
use zeno_core::dynamics::{redfield_integrate, ModelKind};
use zeno_core::measurement::{
    dephasing_survival_opt, dephasing_survival_unopt, flip_time, survival_after_n, sweep,
    transition_candidates, DecaySweep, FlipTime,
};
use zeno_core::tol;

use crate::config::{BathCheckConfig, ExperimentConfig};
use crate::CliError;

pub const CSV_HEADER: &str = "tau,s_unopt,s_opt,gamma_unopt,gamma_opt,theta_opt,phi_opt";

fn fmt12(v: f64) -> String {
    format!("{v:.11e}")
}

fn numeric(e: zeno_core::Error) -> CliError {
    CliError::Numeric(e.to_string())
}

/// Render a finished sweep as the CSV text (12 significant digits per field).
pub fn render_csv(result: &DecaySweep) -> String {
    let mut out = String::with_capacity(64 * (result.outcomes.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &result.outcomes {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt12(row.tau),
            fmt12(row.s_unopt),
            fmt12(row.s_opt),
            fmt12(row.gamma_unopt),
            fmt12(row.gamma_opt),
            fmt12(row.theta_opt),
            fmt12(row.phi_opt),
        );
    }
    out
}

fn render_manifest(lines: &[(String, String)]) -> String {
    let mut out = String::new();
    for (key, value) in lines {
        let _ = writeln!(out, "{key} = {value}");
    }
    out
}

fn flip_time_line(config: &ExperimentConfig) -> Result<String, CliError> {
    let model = config.model_spec()?;
    let rho0 = config.initial.density(&model).map_err(numeric)?;
    let traj = redfield_integrate(&model, &rho0, config.tau_max, config.dt).map_err(numeric)?;
    Ok(match flip_time(&model, &traj).map_err(numeric)? {
        FlipTime::Found(t) => format!("{t:.4}"),
        FlipTime::NotFound { final_nz } => format!("not_found (final n_z = {final_nz:.6})"),
    })
}

/// Survival-gap diagnostic after three measurements at tau = 1, reported for
/// the analytic dephasing model whenever tau = 1 falls inside the sweep.
fn n3_gap_line(config: &ExperimentConfig) -> Result<Option<String>, CliError> {
    if config.model != ModelKind::PureDephasingQubit
        || !(config.tau_min..=config.tau_max).contains(&1.0)
    {
        return Ok(None);
    }
    let model = config.model_spec()?;
    let n0 = config.initial.qubit_bloch().map_err(numeric)?;
    let g1 = gamma(&model.bath, 1.0).map_err(numeric)?;
    let gap = survival_after_n(dephasing_survival_opt(&n0, g1), 3)
        - survival_after_n(dephasing_survival_unopt(&n0, g1), 3);
    Ok(Some(format!("{gap:.6}")))
}

fn candidates_line(taus: &[f64], gammas: &[f64]) -> String {
    let cands = transition_candidates(taus, gammas);
    if cands.is_empty() {
        "none".to_string()
    } else {
        cands
            .iter()
            .map(|t| format!("{t:.4}"))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Run a sweep and return `(csv, manifest)` as complete strings; nothing is
/// written until both exist.
pub fn run_sweep_strings(
    config: &ExperimentConfig,
    command: &str,
    preset_name: Option<&str>,
) -> Result<(String, String), CliError> {
    let started = Instant::now();
    let model = config.model_spec()?;
    let result = sweep(
        &model,
        &config.initial,
        &config.taus(),
        config.choice(),
        Some(config.dt),
    )
    .map_err(numeric)?;
    let csv = render_csv(&result);

    let mut lines: Vec<(String, String)> = vec![("command".into(), command.to_string())];
    if let Some(name) = preset_name {
        lines.push(("preset".into(), name.to_string()));
    }
    lines.extend(config.echo_lines());
    lines.push(("out".into(), config.out.display().to_string()));
    lines.push(("code_version".into(), env!("CARGO_PKG_VERSION").to_string()));
    lines.push((
        "wall_time_s".into(),
        format!("{:.3}", started.elapsed().as_secs_f64()),
    ));
    lines.push(("tol_structural".into(), format!("{:e}", tol::STRUCTURAL)));
    lines.push(("tol_compare".into(), format!("{:e}", tol::COMPARE)));
    lines.push(("quad_rel_tol".into(), format!("{:e}", tol::QUAD_REL)));

    if config.model == ModelKind::PopulationDecay {
        lines.push(("flip_time".into(), flip_time_line(config)?));
    }
    if let Some(gap) = n3_gap_line(config)? {
        lines.push(("n3_gap_tau1".into(), gap));
    }
    let taus: Vec<f64> = result.outcomes.iter().map(|r| r.tau).collect();
    let g_opt: Vec<f64> = result.outcomes.iter().map(|r| r.gamma_opt).collect();
    let g_unopt: Vec<f64> = result.outcomes.iter().map(|r| r.gamma_unopt).collect();
    lines.push(("transitions_opt".into(), candidates_line(&taus, &g_opt)));
    lines.push(("transitions_unopt".into(), candidates_line(&taus, &g_unopt)));
    lines.push((
        "warnings".into(),
        if result.warnings.is_empty() {
            "none".to_string()
        } else {
            result.warnings.join("; ")
        },
    ));

    Ok((csv, render_manifest(&lines)))
}

pub fn manifest_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("manifest")
}

/// `sweep` / `preset`: write the CSV and its manifest next to it.
pub fn run_sweep_to_files(
    config: &ExperimentConfig,
    command: &str,
    preset_name: Option<&str>,
) -> Result<(), CliError> {
    let (csv, manifest) = run_sweep_strings(config, command, preset_name)?;
    let manifest_file = manifest_path(&config.out);
    if let Some(parent) = config.out.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| {
                CliError::Config(format!("cannot create {}: {e}", parent.display()))
            })?;
        }
    }
    std::fs::write(&config.out, csv)
        .map_err(|e| CliError::Numeric(format!("writing {}: {e}", config.out.display())))?;
    std::fs::write(&manifest_file, manifest)
        .map_err(|e| CliError::Numeric(format!("writing {}: {e}", manifest_file.display())))?;
    println!(
        "wrote {} and {}",
        config.out.display(),
        manifest_file.display()
    );
    Ok(())
}

/// `flip-time`: integrate and report tau*.
pub fn run_flip_time(config: &ExperimentConfig) -> Result<(), CliError> {
    if config.model != ModelKind::PopulationDecay {
        return Err(CliError::Config(format!(
            "model: flip-time needs population_decay, got {}",
            crate::config::model_name(config.model)
        )));
    }
    println!("flip_time = {}", flip_time_line(config)?);
    Ok(())
}

/// `bath-check`: quadrature vs Ohmic closed forms on a fixed time grid.
/// Returns an error (exit 2) if any relative error exceeds 1e-6.
pub fn run_bath_check(config: &BathCheckConfig) -> Result<(), CliError> {
    let spectral = SpectralDensity::new(config.g, 1.0, config.omega_c)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let bath =
        BathParams::new(spectral, config.beta).map_err(|e| CliError::Config(e.to_string()))?;

    println!(
        "bath-check: G = {}, omega_c = {}, beta = {}",
        config.g, config.omega_c, config.beta
    );
    println!("t, gamma_rel_err, delta_rel_err, corr_rel_err");
    let mut worst: f64 = 0.0;
    for &t in &[0.01, 0.1, 1.0, 10.0] {
        let gamma_rel = {
            let got = gamma(&bath, t).map_err(numeric)?;
            let exact = closed_form::ohmic_gamma_zero_temperature(config.g, config.omega_c, t);
            relative(got - exact, exact)
        };
        let delta_rel = {
            let got = delta_phase(&bath.spectral, t).map_err(numeric)?;
            let exact = closed_form::ohmic_delta(config.g, config.omega_c, t);
            relative(got - exact, exact)
        };
        let corr_rel = {
            let got = correlation(&bath, t).map_err(numeric)?;
            let exact =
                closed_form::ohmic_correlation_zero_temperature(config.g, config.omega_c, t);
            (got - exact).norm() / exact.norm().max(f64::MIN_POSITIVE)
        };
        worst = worst.max(gamma_rel).max(delta_rel).max(corr_rel);
        println!("{t}, {gamma_rel:.3e}, {delta_rel:.3e}, {corr_rel:.3e}");
    }
    println!("worst = {worst:.3e}");
    // The gamma and C references are the beta -> infinity limits; a hot
    // bath cannot meet them.
    if worst > 1e-6 {
        return Err(CliError::Numeric(format!(
            "bath-check: worst relative error {worst:.3e} exceeds 1e-6"
        )));
    }
    Ok(())
}

fn relative(diff: f64, exact: f64) -> f64 {
    if exact == 0.0 {
        diff.abs()
    } else {
        (diff / exact).abs()
    }
}
