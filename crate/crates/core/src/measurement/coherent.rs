//! Survival against SU(2) coherent-state projectors and its numerical
//! optimization over the sphere angles.
//!
//! The optimizer restricts to coherent projectors (the experimentally
//! accessible family): a coarse grid over (theta', phi') locates the basin,
//! then Nelder-Mead refines it. The survival itself is computed from the
//! coherent-state amplitudes and the exact entrywise propagator rather than
//! by transcribing any printed expansion; at t = 0 and zeta = eta it is
//! exactly 1 by construction.

use std::f64::consts::{PI, TAU};

use crate::bath::BathParams;
use crate::dynamics::dephasing_propagate_large_spin;
use crate::error::Error;
use crate::quantum::{coherent_state, CoherentStateSpec, DensityMatrix, SpinJ};
use crate::Result;

/// Result of a coherent-projector optimization.
#[derive(Debug, Clone, Copy)]
pub struct CoherentOptimum {
    pub theta: f64,
    pub phi: f64,
    pub survival: f64,
}

/// <zeta| rho |zeta> for a coherent projector, clamped to [0, 1].
pub fn coherent_projection(rho: &DensityMatrix, spec: &CoherentStateSpec) -> Result<f64> {
    let z = coherent_state(spec);
    if z.len() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "projector dim {} vs state dim {}",
            z.len(),
            rho.dim()
        )));
    }
    let mut s = 0.0;
    for i in 0..z.len() {
        for k in 0..z.len() {
            s += (z[i].conj() * rho.get(i, k) * z[k]).re;
        }
    }
    Ok(s.clamp(0.0, 1.0))
}

/// Survival of the dephasing large-spin model when |eta, J> is prepared and
/// |zeta, J> is measured after time t.
pub fn coherent_survival(
    eta: &CoherentStateSpec,
    zeta: &CoherentStateSpec,
    t: f64,
    bath: &BathParams,
) -> Result<f64> {
    if eta.j != zeta.j {
        return Err(Error::DimensionMismatch(format!(
            "spin mismatch: eta J = {} vs zeta J = {}",
            eta.j.value(),
            zeta.j.value()
        )));
    }
    let rho0 = DensityMatrix::from_state_vector(&coherent_state(eta))?;
    let rho_t = dephasing_propagate_large_spin(&rho0, t, bath, eta.j)?;
    coherent_projection(&rho_t, zeta)
}

/// Fold arbitrary (theta, phi) back onto the sphere chart
/// [0, pi] x [0, 2 pi).
fn fold_angles(theta: f64, phi: f64) -> (f64, f64) {
    let mut th = theta.rem_euclid(TAU);
    let mut ph = phi;
    if th > PI {
        th = TAU - th;
        ph += PI;
    }
    (th, ph.rem_euclid(TAU))
}

/// Maximize <zeta(theta, phi)| rho |zeta> over coherent projectors.
///
/// `seed` (conventionally the initial-state angles) is always among the
/// candidates, so the result dominates the initial-state projector; the
/// Nelder-Mead refinement never returns less than the best grid value.
pub fn optimize_coherent_projector(
    rho: &DensityMatrix,
    j: SpinJ,
    seed: (f64, f64),
    grid: usize,
) -> Result<CoherentOptimum> {
    let grid = grid.max(4);
    let eval = |theta: f64, phi: f64| -> Result<f64> {
        let (th, ph) = fold_angles(theta, phi);
        coherent_projection(rho, &CoherentStateSpec::new(j, th, ph)?)
    };

    let mut best = (seed.0, seed.1, eval(seed.0, seed.1)?);
    let consider = |theta: f64, phi: f64, best: &mut (f64, f64, f64)| -> Result<()> {
        let s = eval(theta, phi)?;
        if s > best.2 {
            *best = (theta, phi, s);
        }
        Ok(())
    };

    consider(0.0, 0.0, &mut best)?;
    consider(PI, 0.0, &mut best)?;
    for i in 0..grid {
        let theta = PI * (i as f64 + 0.5) / grid as f64;
        for k in 0..grid {
            let phi = TAU * k as f64 / grid as f64;
            consider(theta, phi, &mut best)?;
        }
    }

    // Local Nelder-Mead refinement from the best cell.
    let scale = (PI / grid as f64, TAU / grid as f64);
    let refined = nelder_mead_max(
        |p| eval(p[0], p[1]),
        [best.0, best.1],
        [scale.0, scale.1],
        300,
        1e-12,
    )?;
    if refined.1 > best.2 {
        best = (refined.0[0], refined.0[1], refined.1);
    }

    let (theta, phi) = fold_angles(best.0, best.1);
    Ok(CoherentOptimum {
        theta,
        phi,
        survival: best.2,
    })
}

/// Optimal coherent projector for the exactly solvable dephasing model:
/// propagates |eta, J><eta, J| once, then optimizes the projection.
pub fn optimize_coherent_dephasing(
    eta: &CoherentStateSpec,
    t: f64,
    bath: &BathParams,
    grid: usize,
) -> Result<CoherentOptimum> {
    let rho0 = DensityMatrix::from_state_vector(&coherent_state(eta))?;
    let rho_t = dephasing_propagate_large_spin(&rho0, t, bath, eta.j)?;
    optimize_coherent_projector(&rho_t, eta.j, (eta.theta, eta.phi), grid)
}

/// Standard Nelder-Mead on 2 parameters, maximizing `f`. Returns the best
/// point and value seen.
fn nelder_mead_max(
    f: impl Fn([f64; 2]) -> Result<f64>,
    start: [f64; 2],
    step: [f64; 2],
    max_iter: usize,
    tol: f64,
) -> Result<([f64; 2], f64)> {
    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;

    let mut simplex = [
        start,
        [start[0] + step[0], start[1]],
        [start[0], start[1] + step[1]],
    ];
    let mut scores: Vec<f64> = simplex.iter().map(|&p| f(p)).collect::<Result<Vec<_>>>()?;

    for _ in 0..max_iter {
        let mut order: Vec<usize> = (0..3).collect();
        order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap());
        let (best, mid, worst) = (order[0], order[1], order[2]);

        if scores[best] - scores[worst] < tol {
            break;
        }

        let centroid = [
            0.5 * (simplex[best][0] + simplex[mid][0]),
            0.5 * (simplex[best][1] + simplex[mid][1]),
        ];
        let reflect = [
            centroid[0] + ALPHA * (centroid[0] - simplex[worst][0]),
            centroid[1] + ALPHA * (centroid[1] - simplex[worst][1]),
        ];
        let s_reflect = f(reflect)?;

        if s_reflect > scores[best] {
            let expand = [
                centroid[0] + GAMMA * (reflect[0] - centroid[0]),
                centroid[1] + GAMMA * (reflect[1] - centroid[1]),
            ];
            let s_expand = f(expand)?;
            if s_expand > s_reflect {
                simplex[worst] = expand;
                scores[worst] = s_expand;
            } else {
                simplex[worst] = reflect;
                scores[worst] = s_reflect;
            }
            continue;
        }
        if s_reflect > scores[mid] {
            simplex[worst] = reflect;
            scores[worst] = s_reflect;
            continue;
        }

        let contract = [
            centroid[0] + RHO * (simplex[worst][0] - centroid[0]),
            centroid[1] + RHO * (simplex[worst][1] - centroid[1]),
        ];
        let s_contract = f(contract)?;
        if s_contract > scores[worst] {
            simplex[worst] = contract;
            scores[worst] = s_contract;
            continue;
        }

        for &i in &[mid, worst] {
            simplex[i] = [
                simplex[best][0] + SIGMA * (simplex[i][0] - simplex[best][0]),
                simplex[best][1] + SIGMA * (simplex[i][1] - simplex[best][1]),
            ];
            scores[i] = f(simplex[i])?;
        }
    }

    let mut best = 0;
    for i in 1..3 {
        if scores[i] > scores[best] {
            best = i;
        }
    }
    Ok((simplex[best], scores[best]))
}
