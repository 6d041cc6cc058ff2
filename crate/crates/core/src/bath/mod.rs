//! Bath description and the integrals that drive every model: the spectral
//! density J(omega) = G omega^s omega_c^(1-s) exp(-omega/omega_c), the
//! correlation function C(t), the dephasing exponent gamma(t), and the
//! bath-induced phase Delta(t).
//!
//! Bath mode sums are taken in the continuum limit
//! sum_k |g_k|^2 (...) -> int domega J(omega) (...), which is the reading
//! that makes the spectral density meaningful. Quadrature truncates at
//! omega = 50 omega_c, where the exponential cutoff is below 2e-22.

pub mod quad;
mod series;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::Error;
use crate::tol;
use crate::Result;

pub use series::correlation_series;

/// Factor by which the upper quadrature limit exceeds the cutoff frequency.
const UPPER_CUTOFF_FACTOR: f64 = 50.0;

/// Ohmic-family spectral density parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDensity {
    /// Coupling strength G.
    pub g: f64,
    /// Ohmicity exponent: s < 1 sub-Ohmic, s = 1 Ohmic, s > 1 super-Ohmic.
    pub s: f64,
    /// Cutoff frequency.
    pub omega_c: f64,
}

impl SpectralDensity {
    pub fn new(g: f64, s: f64, omega_c: f64) -> Result<Self> {
        if !g.is_finite() || g < 0.0 {
            return Err(Error::InvalidArgument(format!("G = {g} must be >= 0")));
        }
        if !s.is_finite() || s <= 0.0 {
            return Err(Error::InvalidArgument(format!("s = {s} must be > 0")));
        }
        if !omega_c.is_finite() || omega_c <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "omega_c = {omega_c} must be > 0"
            )));
        }
        Ok(Self { g, s, omega_c })
    }

    #[inline]
    fn value_unchecked(&self, omega: f64) -> f64 {
        let power = if self.s == 1.0 {
            omega
        } else {
            omega.powf(self.s) * self.omega_c.powf(1.0 - self.s)
        };
        self.g * power * (-omega / self.omega_c).exp()
    }

    fn upper_limit(&self) -> f64 {
        UPPER_CUTOFF_FACTOR * self.omega_c
    }
}

/// Spectral density plus inverse temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParams {
    pub spectral: SpectralDensity,
    /// Inverse temperature; use a large finite value for the very low
    /// temperature regime.
    pub beta: f64,
}

impl BathParams {
    pub fn new(spectral: SpectralDensity, beta: f64) -> Result<Self> {
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::InvalidArgument(format!("beta = {beta} must be > 0")));
        }
        Ok(Self { spectral, beta })
    }
}

/// J(omega); rejects negative frequencies.
pub fn spectral_density(spectral: &SpectralDensity, omega: f64) -> Result<f64> {
    if omega < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "omega = {omega} must be >= 0"
        )));
    }
    if omega == 0.0 {
        return Ok(0.0);
    }
    Ok(spectral.value_unchecked(omega))
}

#[inline]
fn coth(x: f64) -> f64 {
    1.0 / x.tanh()
}

/// (1 - cos x), series-stabilized for small |x|.
#[inline]
fn one_minus_cos(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        0.5 * x2 * (1.0 - x2 / 12.0 * (1.0 - x2 / 30.0))
    } else {
        1.0 - x.cos()
    }
}

/// (sin x - x), series-stabilized for small |x|.
#[inline]
fn sin_minus_x(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        -x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0))
    } else {
        x.sin() - x
    }
}

/// Bath correlation function
/// C(t) = int_0^inf domega J(omega) [coth(beta omega / 2) cos(omega t)
///        - i sin(omega t)], by adaptive quadrature.
pub fn correlation(bath: &BathParams, t: f64) -> Result<C64> {
    if t < 0.0 {
        return Err(Error::InvalidArgument(format!("t = {t} must be >= 0")));
    }
    let sd = bath.spectral;
    if sd.g == 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let upper = sd.upper_limit();
    let beta = bath.beta;
    let breaks = quad::bath_breakpoints(upper, t, sd.omega_c, Some(beta));

    let re = quad::integrate_segmented(
        |w| sd.value_unchecked(w) * coth(0.5 * beta * w) * (w * t).cos(),
        &breaks,
        tol::QUAD_REL,
        tol::QUAD_ABS_FLOOR,
        t,
    )?;
    let im = quad::integrate_segmented(
        |w| -sd.value_unchecked(w) * (w * t).sin(),
        &breaks,
        tol::QUAD_REL,
        tol::QUAD_ABS_FLOOR,
        t,
    )?;
    Ok(C64::new(re.value, im.value))
}

/// Dephasing exponent
/// gamma(t) = 4 int_0^inf domega J(omega) (1 - cos(omega t)) / omega^2
///            coth(beta omega / 2).
pub fn gamma(bath: &BathParams, t: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::InvalidArgument(format!("t = {t} must be >= 0")));
    }
    if t == 0.0 || bath.spectral.g == 0.0 {
        return Ok(0.0);
    }
    let sd = bath.spectral;
    let beta = bath.beta;
    let upper = sd.upper_limit();
    let breaks = quad::bath_breakpoints(upper, t, sd.omega_c, Some(beta));
    let r = quad::integrate_segmented(
        |w| 4.0 * sd.value_unchecked(w) * one_minus_cos(w * t) / (w * w) * coth(0.5 * beta * w),
        &breaks,
        tol::QUAD_REL,
        tol::QUAD_ABS_FLOOR,
        t,
    )?;
    Ok(r.value)
}

/// Bath-induced phase
/// Delta(t) = 4 int_0^inf domega J(omega) (sin(omega t) - omega t) / omega^2.
///
/// Temperature never enters (no coth factor); Delta(0) = 0 and
/// Delta(t) <= 0 for t >= 0.
pub fn delta_phase(spectral: &SpectralDensity, t: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::InvalidArgument(format!("t = {t} must be >= 0")));
    }
    if t == 0.0 || spectral.g == 0.0 {
        return Ok(0.0);
    }
    let sd = *spectral;
    let upper = sd.upper_limit();
    let breaks = quad::bath_breakpoints(upper, t, sd.omega_c, None);
    let r = quad::integrate_segmented(
        |w| 4.0 * sd.value_unchecked(w) * sin_minus_x(w * t) / (w * w),
        &breaks,
        tol::QUAD_REL,
        tol::QUAD_ABS_FLOOR,
        t,
    )?;
    Ok(r.value)
}

/// Correlation function tabulated on a uniform grid covering [0, t_max].
#[derive(Debug, Clone)]
pub struct CorrelationTable {
    dt: f64,
    values: Vec<C64>,
}

impl CorrelationTable {
    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, index: usize) -> C64 {
        self.values[index]
    }

    pub fn t_max(&self) -> f64 {
        self.dt * (self.values.len() - 1) as f64
    }

    pub fn covers(&self, t: f64) -> bool {
        (0.0..=self.t_max() + 1e-9 * self.dt).contains(&t)
    }
}

/// Precompute C on a uniform grid for the integrator. Entries come from the
/// series evaluator (each matches the quadrature route within its tolerance;
/// see the crate tests).
pub fn tabulate_correlation(bath: &BathParams, t_max: f64, dt: f64) -> Result<CorrelationTable> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::InvalidArgument(format!("dt = {dt} must be > 0")));
    }
    if t_max < dt {
        return Err(Error::InvalidArgument(format!(
            "t_max = {t_max} must be >= dt = {dt}"
        )));
    }
    let intervals = ((t_max / dt) - 1e-9).ceil().max(1.0) as usize;
    let values: Vec<C64> = (0..=intervals)
        .into_par_iter()
        .map(|k| correlation_series(bath, k as f64 * dt))
        .collect::<Result<_>>()?;
    Ok(CorrelationTable { dt, values })
}

/// Closed-form references for the Ohmic (s = 1) bath at zero temperature,
/// used by the `bath-check` self-test and the oracle suite.
pub mod closed_form {
    use num_complex::Complex64 as C64;

    /// gamma(t) -> 2 G ln(1 + omega_c^2 t^2) as beta -> infinity.
    pub fn ohmic_gamma_zero_temperature(g: f64, omega_c: f64, t: f64) -> f64 {
        2.0 * g * (1.0 + omega_c * omega_c * t * t).ln()
    }

    /// Delta(t) = 4 G [arctan(omega_c t) - omega_c t] for any temperature.
    pub fn ohmic_delta(g: f64, omega_c: f64, t: f64) -> f64 {
        4.0 * g * ((omega_c * t).atan() - omega_c * t)
    }

    /// C(t) -> G / (1/omega_c + i t)^2 as beta -> infinity.
    pub fn ohmic_correlation_zero_temperature(g: f64, omega_c: f64, t: f64) -> C64 {
        C64::new(g, 0.0) / C64::new(1.0 / omega_c, t).powi(2)
    }
}
