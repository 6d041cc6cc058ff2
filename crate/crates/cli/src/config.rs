//! Flat `key = value` experiment configs (UTF-8, `#` comments).

use std::collections::BTreeMap;
use std::path::PathBuf;

use zeno_core::bath::{BathParams, SpectralDensity};
use zeno_core::dynamics::{ModelKind, ModelSpec};
use zeno_core::measurement::{InitialState, ProjectorChoice};
use zeno_core::quantum::{BlochVector, SpinJ};

use crate::CliError;

const KNOWN_KEYS: &[&str] = &[
    "model",
    "epsilon",
    "delta",
    "J",
    "G",
    "s_ohmic",
    "omega_c",
    "beta",
    "theta",
    "phi",
    "n_x",
    "n_y",
    "n_z",
    "tau_min",
    "tau_max",
    "tau_steps",
    "dt",
    "grid",
    "out",
];

/// Everything a sweep run needs, with defaults resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: ModelKind,
    pub epsilon: f64,
    pub delta: f64,
    pub j: f64,
    pub g: f64,
    pub s_ohmic: f64,
    pub omega_c: f64,
    pub beta: f64,
    pub initial: InitialState,
    pub tau_min: f64,
    pub tau_max: f64,
    pub tau_steps: usize,
    pub dt: f64,
    pub grid: usize,
    pub out: PathBuf,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

pub(crate) fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(config_err(format!(
                "line {}: expected 'key = value', got '{line}'",
                lineno + 1
            )));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if map.insert(key.clone(), value).is_some() {
            return Err(config_err(format!("duplicate key '{key}'")));
        }
    }
    Ok(map)
}

fn take_f64(map: &BTreeMap<String, String>, key: &str) -> Result<Option<f64>, CliError> {
    match map.get(key) {
        None => Ok(None),
        Some(raw) => raw
            .parse::<f64>()
            .map(Some)
            .map_err(|_| config_err(format!("{key}: '{raw}' is not a number"))),
    }
}

fn require_f64(map: &BTreeMap<String, String>, key: &str) -> Result<f64, CliError> {
    take_f64(map, key)?.ok_or_else(|| config_err(format!("missing required key '{key}'")))
}

fn parse_model(raw: &str) -> Result<ModelKind, CliError> {
    match raw {
        "population_decay" => Ok(ModelKind::PopulationDecay),
        "pure_dephasing" => Ok(ModelKind::PureDephasingQubit),
        "spin_boson" => Ok(ModelKind::SpinBoson),
        "large_spin_dephasing" => Ok(ModelKind::LargeSpinDephasing),
        "large_spin" => Ok(ModelKind::LargeSpin),
        other => Err(config_err(format!(
            "model: unknown model '{other}' (expected population_decay, pure_dephasing, \
             spin_boson, large_spin_dephasing, or large_spin)"
        ))),
    }
}

pub(crate) fn model_name(kind: ModelKind) -> &'static str {
    match kind {
        ModelKind::PopulationDecay => "population_decay",
        ModelKind::PureDephasingQubit => "pure_dephasing",
        ModelKind::SpinBoson => "spin_boson",
        ModelKind::LargeSpinDephasing => "large_spin_dephasing",
        ModelKind::LargeSpin => "large_spin",
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let map = parse_key_values(text)?;
        for key in map.keys() {
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(config_err(format!("unknown key '{key}'")));
            }
        }

        let model = parse_model(
            map.get("model")
                .ok_or_else(|| config_err("missing required key 'model'"))?,
        )?;

        let epsilon = require_f64(&map, "epsilon")?;
        let delta = take_f64(&map, "delta")?.unwrap_or(0.0);
        let j = match take_f64(&map, "J")? {
            Some(j) => j,
            None if model.is_large_spin() => {
                return Err(config_err("missing required key 'J' for large-spin models"));
            }
            None => 0.5,
        };
        let g = require_f64(&map, "G")?;
        let s_ohmic = take_f64(&map, "s_ohmic")?.unwrap_or(1.0);
        let omega_c = require_f64(&map, "omega_c")?;
        let beta = match take_f64(&map, "beta")? {
            Some(b) => b,
            None => {
                if epsilon <= 0.0 {
                    return Err(config_err(
                        "beta: no default available (the low-temperature convention \
                         beta = 100/epsilon needs epsilon > 0); supply beta explicitly",
                    ));
                }
                100.0 / epsilon
            }
        };

        let has_angles = map.contains_key("theta") || map.contains_key("phi");
        let bloch_count = ["n_x", "n_y", "n_z"]
            .iter()
            .filter(|k| map.contains_key(**k))
            .count();
        let initial = match (has_angles, bloch_count) {
            (true, 0) => InitialState::Angles {
                theta: require_f64(&map, "theta")?,
                phi: take_f64(&map, "phi")?.unwrap_or(0.0),
            },
            (false, 3) => InitialState::Bloch(BlochVector::new(
                require_f64(&map, "n_x")?,
                require_f64(&map, "n_y")?,
                require_f64(&map, "n_z")?,
            )),
            (false, 0) => {
                return Err(config_err(
                    "initial state missing: supply (theta, phi) or (n_x, n_y, n_z)",
                ));
            }
            (true, _) => {
                return Err(config_err(
                    "initial state ambiguous: supply (theta, phi) or (n_x, n_y, n_z), not both",
                ));
            }
            (false, _) => {
                return Err(config_err(
                    "initial state incomplete: a Bloch vector needs all of n_x, n_y, n_z",
                ));
            }
        };

        let tau_min = require_f64(&map, "tau_min")?;
        let tau_max = require_f64(&map, "tau_max")?;
        let tau_steps = match map.get("tau_steps") {
            None => return Err(config_err("missing required key 'tau_steps'")),
            Some(raw) => raw
                .parse::<usize>()
                .map_err(|_| config_err(format!("tau_steps: '{raw}' is not a positive integer")))?,
        };
        if tau_min <= 0.0 {
            return Err(config_err(format!("tau_min: must be > 0, got {tau_min}")));
        }
        if tau_max <= tau_min {
            return Err(config_err(format!(
                "tau_max: must exceed tau_min = {tau_min}, got {tau_max}"
            )));
        }
        if tau_steps < 2 {
            return Err(config_err(format!(
                "tau_steps: must be >= 2, got {tau_steps}"
            )));
        }

        let max_freq = epsilon.abs().max(delta.abs()).max(omega_c);
        let dt = take_f64(&map, "dt")?.unwrap_or(0.1 / max_freq);
        if dt <= 0.0 {
            return Err(config_err(format!("dt: must be > 0, got {dt}")));
        }
        if dt * max_freq >= 0.5 {
            return Err(config_err(format!(
                "dt: {dt} too coarse; dt * max(epsilon, delta, omega_c) = {} must be < 0.5 \
                 (try dt = {})",
                dt * max_freq,
                0.1 / max_freq
            )));
        }

        let grid = match map.get("grid") {
            None => 64,
            Some(raw) => raw
                .parse::<usize>()
                .map_err(|_| config_err(format!("grid: '{raw}' is not a positive integer")))?,
        };
        if grid < 4 {
            return Err(config_err(format!("grid: must be >= 4, got {grid}")));
        }

        let out = PathBuf::from(map.get("out").map(String::as_str).unwrap_or("sweep.csv"));

        let config = Self {
            model,
            epsilon,
            delta,
            j,
            g,
            s_ohmic,
            omega_c,
            beta,
            initial,
            tau_min,
            tau_max,
            tau_steps,
            dt,
            grid,
            out,
        };
        // Surface model/bath invariant violations (negative G, bad J, ...)
        // as config errors naming the offending rule.
        config.model_spec()?;
        Ok(config)
    }

    pub fn model_spec(&self) -> Result<ModelSpec, CliError> {
        let spectral = SpectralDensity::new(self.g, self.s_ohmic, self.omega_c)
            .map_err(|e| config_err(e.to_string()))?;
        let bath = BathParams::new(spectral, self.beta).map_err(|e| config_err(e.to_string()))?;
        let j = SpinJ::try_from_f64(self.j).map_err(|e| config_err(e.to_string()))?;
        ModelSpec::new(self.model, self.epsilon, self.delta, j, bath)
            .map_err(|e| config_err(e.to_string()))
    }

    pub fn taus(&self) -> Vec<f64> {
        (0..self.tau_steps)
            .map(|i| {
                self.tau_min
                    + (self.tau_max - self.tau_min) * i as f64 / (self.tau_steps - 1) as f64
            })
            .collect()
    }

    pub fn choice(&self) -> ProjectorChoice {
        if self.model.is_large_spin() {
            ProjectorChoice::OptimalCoherent { grid: self.grid }
        } else {
            ProjectorChoice::OptimalQubit
        }
    }

    /// Parameter echo for the manifest, in a fixed order.
    pub fn echo_lines(&self) -> Vec<(String, String)> {
        let mut lines = vec![
            ("model".into(), model_name(self.model).to_string()),
            ("epsilon".into(), self.epsilon.to_string()),
            ("delta".into(), self.delta.to_string()),
            ("J".into(), self.j.to_string()),
            ("G".into(), self.g.to_string()),
            ("s_ohmic".into(), self.s_ohmic.to_string()),
            ("omega_c".into(), self.omega_c.to_string()),
            ("beta".into(), self.beta.to_string()),
        ];
        match self.initial {
            InitialState::Angles { theta, phi } => {
                lines.push(("theta".into(), theta.to_string()));
                lines.push(("phi".into(), phi.to_string()));
            }
            InitialState::Bloch(n) => {
                lines.push(("n_x".into(), n.x.to_string()));
                lines.push(("n_y".into(), n.y.to_string()));
                lines.push(("n_z".into(), n.z.to_string()));
            }
        }
        lines.push(("tau_min".into(), self.tau_min.to_string()));
        lines.push(("tau_max".into(), self.tau_max.to_string()));
        lines.push(("tau_steps".into(), self.tau_steps.to_string()));
        lines.push(("dt".into(), self.dt.to_string()));
        lines.push(("grid".into(), self.grid.to_string()));
        lines
    }
}

/// Subset needed by `bath-check`: Ohmic bath parameters only.
#[derive(Debug, Clone, Copy)]
pub struct BathCheckConfig {
    pub g: f64,
    pub omega_c: f64,
    pub beta: f64,
}

impl BathCheckConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let map = parse_key_values(text)?;
        for key in map.keys() {
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(config_err(format!("unknown key '{key}'")));
            }
        }
        let s_ohmic = take_f64(&map, "s_ohmic")?.unwrap_or(1.0);
        if s_ohmic != 1.0 {
            return Err(config_err(format!(
                "s_ohmic: bath-check closed forms are Ohmic (s = 1) only, got {s_ohmic}"
            )));
        }
        let g = require_f64(&map, "G")?;
        let omega_c = require_f64(&map, "omega_c")?;
        let beta = take_f64(&map, "beta")?.unwrap_or(1e6);
        if g < 0.0 {
            return Err(config_err(format!("G: must be >= 0, got {g}")));
        }
        if omega_c <= 0.0 {
            return Err(config_err(format!("omega_c: must be > 0, got {omega_c}")));
        }
        if beta <= 0.0 {
            return Err(config_err(format!("beta: must be > 0, got {beta}")));
        }
        Ok(Self { g, omega_c, beta })
    }
}
