//! Globally adaptive Gauss-Kronrod (G7, K15) quadrature on a pre-segmented
//! interval. Callers seed the segmentation (period boundaries for oscillatory
//! integrands, decade points near an endpoint singularity); refinement then
//! always splits the panel with the largest error estimate.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::Error;
use crate::Result;

// 15-point Kronrod abscissae on [-1, 1] (symmetric; last entry is the center)
// and weights, with the embedded 7-point Gauss rule on the odd-index nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_813,
    0.949_107_912_342_759,
    0.864_864_423_359_769,
    0.741_531_185_599_394,
    0.586_087_235_467_691,
    0.405_845_151_377_397,
    0.207_784_955_007_898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529,
    0.063_092_092_629_979,
    0.104_790_010_322_250,
    0.140_653_259_715_525,
    0.169_004_726_639_267,
    0.190_350_578_064_785,
    0.204_432_940_075_298,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_870,
    0.279_705_391_489_277,
    0.381_830_050_505_119,
    0.417_959_183_673_469,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
    }
}

fn kronrod_panel(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = half * XGK[i];
        let fsum = f(center - dx) + f(center + dx);
        kronrod += WGK[i] * fsum;
        if i % 2 == 1 {
            gauss += WG[i / 2] * fsum;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    if !value.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "integrand not finite on [{a}, {b}]"
        )));
    }
    Ok(Panel { a, b, value, error })
}

/// Result of an adaptive integration that met its target.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub panels: usize,
}

/// Integrate over the union of `[breaks[i], breaks[i+1]]`, refining until the
/// summed error estimate drops below `max(rel_tol * |value|, abs_floor)`.
///
/// `t_label` only annotates the error on non-convergence.
pub fn integrate_segmented(
    f: impl Fn(f64) -> f64,
    breaks: &[f64],
    rel_tol: f64,
    abs_floor: f64,
    t_label: f64,
) -> Result<QuadResult> {
    assert!(breaks.len() >= 2, "need at least one segment");
    const MAX_PANELS: usize = 400_000;

    let mut heap = BinaryHeap::new();
    let mut value = 0.0;
    let mut error = 0.0;
    // Error stuck on panels too narrow to split further.
    let mut floor_error = 0.0;
    let mut panels = 0usize;

    for w in breaks.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let p = kronrod_panel(&f, w[0], w[1])?;
        value += p.value;
        error += p.error;
        panels += 1;
        heap.push(p);
    }

    loop {
        let target = (rel_tol * value.abs()).max(abs_floor);
        if error + floor_error <= target {
            return Ok(QuadResult {
                value,
                error_estimate: error + floor_error,
                panels,
            });
        }
        let Some(worst) = heap.pop() else {
            break;
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) || panels >= MAX_PANELS {
            // Cannot refine further; retire the panel.
            floor_error += worst.error;
            error -= worst.error;
            if panels >= MAX_PANELS {
                break;
            }
            continue;
        }
        let left = kronrod_panel(&f, worst.a, mid)?;
        let right = kronrod_panel(&f, mid, worst.b)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels += 1;
        heap.push(left);
        heap.push(right);
    }

    let estimate = error + floor_error;
    let target = (rel_tol * value.abs()).max(abs_floor);
    if estimate <= target {
        Ok(QuadResult {
            value,
            error_estimate: estimate,
            panels,
        })
    } else {
        Err(Error::QuadratureNotConverged {
            t: t_label,
            estimate,
            target,
            panels,
        })
    }
}

/// Breakpoints for integrands of the form J(omega) * trig(omega * t) on
/// [0, upper]: decade seeds near zero (endpoint singularities for s < 1 and
/// the coth boundary layer), the thermal scale 1/beta, and half-period
/// boundaries pi/t for the oscillatory factor.
pub fn bath_breakpoints(upper: f64, t: f64, omega_c: f64, beta: Option<f64>) -> Vec<f64> {
    let mut pts = vec![0.0, upper];
    for scale in [1e-6, 1e-4, 1e-2, 0.1, 1.0] {
        let w = omega_c * scale;
        if w < upper {
            pts.push(w);
        }
    }
    if let Some(beta) = beta {
        for w in [0.5 / beta, 5.0 / beta] {
            if w > 0.0 && w < upper {
                pts.push(w);
            }
        }
    }
    if t > 0.0 {
        let half_period = std::f64::consts::PI / t;
        let n_osc = (upper / half_period).floor() as usize;
        if n_osc >= 2 {
            for k in 1..=n_osc {
                pts.push(k as f64 * half_period);
            }
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() <= f64::EPSILON * upper);
    pts
}
