//! Time-local Redfield integrator.
//!
//! The master equation
//!
//!   d rho / dt = i [rho, H_S] + { [K(t) rho, F] + h.c. },
//!   K(t) = int_0^t du C(u) exp(-i H_S u) F exp(+i H_S u),
//!
//! is the memory integral of the weak-coupling master equation rewritten with
//! u = t - s, which makes the generator time-local (an identity, not an extra
//! approximation, since the memory term already evaluates rho at time t).
//! In the H_S eigenbasis the kernel integrand is entrywise
//! C(u) F_ab exp(-i (lambda_a - lambda_b) u), so K is accumulated from the
//! correlation table by a cumulative 4th-order composite rule and cached on
//! the half-step grid the RK4 stepper samples.
//!
//! The conjugation direction in K matters: it is fixed by requiring relaxation
//! toward the bath's thermal occupation (population flows to the ground state
//! as beta grows), which also pins the flip time the acceptance run checks.

use num_complex::Complex64 as C64;

use super::{ModelSpec, Trajectory};
use crate::bath::{tabulate_correlation, CorrelationTable};
use crate::error::Error;
use crate::quantum::{ComplexMatrix, DensityMatrix, HermitianEigen};
use crate::Result;

/// dt * max_frequency must stay below this for the fixed-step RK4 to resolve
/// both the system frequencies and the bath cutoff.
const STEP_RESOLUTION_LIMIT: f64 = 0.5;

/// Cumulative integrals of g_ab(u) = C(u) exp(-i (lambda_a - lambda_b) u) on
/// a uniform grid, composed into kernel matrices.
struct KernelGrid {
    kernels: Vec<ComplexMatrix>,
    dt: f64,
}

impl KernelGrid {
    /// Build K at every grid point of `table`.
    fn build(model: &ModelSpec, table: &CorrelationTable) -> Result<Self> {
        let h = model.hamiltonian();
        let eig = h.hermitian_eigen()?;
        let dim = h.dim();
        let f_eig = eig
            .vectors
            .adjoint()
            .mul(&model.coupling())
            .mul(&eig.vectors);

        let n = table.len();
        let dt = table.dt();

        // Cumulative integral per (a, b) frequency pair.
        let mut cumulative: Vec<Vec<C64>> = vec![Vec::with_capacity(n); dim * dim];
        for a in 0..dim {
            for b in 0..dim {
                let delta = eig.values[a] - eig.values[b];
                let g: Vec<C64> = (0..n)
                    .map(|k| {
                        let u = k as f64 * dt;
                        table.value(k) * C64::new(0.0, -delta * u).exp()
                    })
                    .collect();
                cumulative[a * dim + b] = cumulative_integral(&g, dt);
            }
        }

        let kernels = (0..n)
            .map(|k| kernel_at(&eig, &f_eig, &cumulative, dim, k))
            .collect();
        Ok(Self { kernels, dt })
    }

    fn at(&self, index: usize) -> &ComplexMatrix {
        &self.kernels[index]
    }
}

fn kernel_at(
    eig: &HermitianEigen,
    f_eig: &ComplexMatrix,
    cumulative: &[Vec<C64>],
    dim: usize,
    k: usize,
) -> ComplexMatrix {
    let in_eigenbasis =
        ComplexMatrix::from_fn(dim, |a, b| f_eig.get(a, b) * cumulative[a * dim + b][k]);
    eig.vectors.mul(&in_eigenbasis).mul(&eig.vectors.adjoint())
}

/// Cumulative integral of uniformly sampled values, 4th-order accurate:
/// Simpson pairs reach the even points, a quadratic half-panel rule the odd
/// ones.
fn cumulative_integral(g: &[C64], dt: f64) -> Vec<C64> {
    let n = g.len();
    let mut out = vec![C64::new(0.0, 0.0); n];
    if n < 2 {
        return out;
    }
    if n == 2 {
        out[1] = (g[0] + g[1]) * (0.5 * dt);
        return out;
    }
    for k in (2..n).step_by(2) {
        out[k] = out[k - 2] + (g[k - 2] + g[k - 1] * 4.0 + g[k]) * (dt / 3.0);
    }
    for k in (1..n).step_by(2) {
        if k + 1 < n {
            out[k] = out[k - 1] + (g[k - 1] * 5.0 + g[k] * 8.0 - g[k + 1]) * (dt / 12.0);
        } else {
            out[k] = out[k - 1] + (-g[k - 2] + g[k - 1] * 8.0 + g[k] * 5.0) * (dt / 12.0);
        }
    }
    out
}

/// Memory kernel K(t) accumulated over the correlation table; exact at grid
/// points, linearly interpolated between them.
pub fn redfield_kernel(
    model: &ModelSpec,
    table: &CorrelationTable,
    t: f64,
) -> Result<ComplexMatrix> {
    if t < 0.0 || !table.covers(t) {
        return Err(Error::TimeOutOfRange {
            t,
            t_max: table.t_max(),
        });
    }
    let grid = KernelGrid::build(model, table)?;
    let x = t / grid.dt;
    let idx = (x.floor() as usize).min(table.len() - 1);
    let w = x - idx as f64;
    if w < 1e-12 || idx + 1 >= table.len() {
        return Ok(grid.at(idx).clone());
    }
    Ok(grid
        .at(idx)
        .scale_re(1.0 - w)
        .add(&grid.at(idx + 1).scale_re(w)))
}

fn rhs(
    rho: &ComplexMatrix,
    h: &ComplexMatrix,
    f: &ComplexMatrix,
    kernel: &ComplexMatrix,
) -> ComplexMatrix {
    let coherent = rho.commutator(h).scale(C64::new(0.0, 1.0));
    let m = kernel.mul(rho).commutator(f);
    coherent.add(&m).add(&m.adjoint())
}

/// Integrate the master equation from `rho0` to `t_max` with fixed step `dt`
/// (classical 4th-order stepping; kernels precomputed on the half-step grid;
/// states re-Hermitized every step).
pub fn redfield_integrate(
    model: &ModelSpec,
    rho0: &DensityMatrix,
    t_max: f64,
    dt: f64,
) -> Result<Trajectory> {
    if rho0.dim() != model.dim() {
        return Err(Error::DimensionMismatch(format!(
            "initial state dim {} vs model dim {}",
            rho0.dim(),
            model.dim()
        )));
    }
    if !dt.is_finite() || dt <= 0.0 || !t_max.is_finite() || t_max <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "need dt > 0 and t_max > 0, got dt = {dt}, t_max = {t_max}"
        )));
    }
    let product = dt * model.max_frequency();
    if product >= STEP_RESOLUTION_LIMIT {
        return Err(Error::StepSizeTooCoarse {
            dt,
            product,
            suggested: 0.1 / model.max_frequency(),
        });
    }

    let steps = ((t_max / dt) - 1e-9).ceil().max(1.0) as usize;
    let half = 0.5 * dt;
    let table = tabulate_correlation(&model.bath, steps as f64 * dt, half)?;
    let kernel_grid = KernelGrid::build(model, &table)?;

    let h = model.hamiltonian();
    let f = model.coupling();

    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(rho0.clone());

    let mut rho = rho0.matrix().clone();
    for step in 0..steps {
        let k_t = kernel_grid.at(2 * step);
        let k_mid = kernel_grid.at(2 * step + 1);
        let k_next = kernel_grid.at(2 * step + 2);

        let k1 = rhs(&rho, &h, &f, k_t);
        let k2 = rhs(&rho.add(&k1.scale_re(half)), &h, &f, k_mid);
        let k3 = rhs(&rho.add(&k2.scale_re(half)), &h, &f, k_mid);
        let k4 = rhs(&rho.add(&k3.scale_re(dt)), &h, &f, k_next);

        let increment = k1
            .add(&k2.scale_re(2.0))
            .add(&k3.scale_re(2.0))
            .add(&k4)
            .scale_re(dt / 6.0);
        rho = rho.add(&increment).hermitize();

        times.push((step + 1) as f64 * dt);
        states.push(DensityMatrix::new(rho.clone()).map_err(|e| {
            Error::InvalidDensityMatrix(format!("at t = {}: {e}", (step + 1) as f64 * dt))
        })?);
    }

    Ok(Trajectory::new(times, states, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::{correlation_series, quad, BathParams, SpectralDensity};
    use crate::dynamics::{dephasing_propagate_qubit, frame_removed_state, ModelKind};
    use crate::quantum::{
        bloch_from_density, density_from_bloch, evolve_unitary, BlochVector, SpinJ,
    };
    use crate::tol;

    fn bath(g: f64, omega_c: f64, beta: f64) -> BathParams {
        BathParams::new(SpectralDensity::new(g, 1.0, omega_c).unwrap(), beta).unwrap()
    }

    fn dephasing_model(g: f64) -> ModelSpec {
        ModelSpec::new(
            ModelKind::PureDephasingQubit,
            1.0,
            0.0,
            SpinJ::HALF,
            bath(g, 10.0, 0.5),
        )
        .unwrap()
    }

    #[test]
    fn kernel_boundary_cases() {
        let model = dephasing_model(0.1);
        let table = tabulate_correlation(&model.bath, 1.0, 0.01).unwrap();
        let k0 = redfield_kernel(&model, &table, 0.0).unwrap();
        assert!(k0.max_abs() < 1e-15);
        assert!(redfield_kernel(&model, &table, 2.0).is_err());

        let free = ModelSpec::new(
            ModelKind::PureDephasingQubit,
            1.0,
            0.0,
            SpinJ::HALF,
            bath(0.0, 10.0, 0.5),
        )
        .unwrap();
        let table = tabulate_correlation(&free.bath, 1.0, 0.01).unwrap();
        let k = redfield_kernel(&free, &table, 0.8).unwrap();
        assert!(k.max_abs() < 1e-15);
    }

    #[test]
    fn kernel_commuting_case_reduces_to_scalar_integral() {
        // [H_S, F] = 0 for pure dephasing, so K(t) = F int_0^t C(u) du;
        // compare against direct scalar quadrature of the tabulated series.
        let model = dephasing_model(0.1);
        let t = 0.75;
        let table = tabulate_correlation(&model.bath, 1.0, 0.00125).unwrap();
        let k = redfield_kernel(&model, &table, t).unwrap();

        let re = quad::integrate_segmented(
            |u| correlation_series(&model.bath, u).unwrap().re,
            &[0.0, t / 2.0, t],
            1e-11,
            1e-14,
            t,
        )
        .unwrap()
        .value;
        let im = quad::integrate_segmented(
            |u| correlation_series(&model.bath, u).unwrap().im,
            &[0.0, t / 2.0, t],
            1e-11,
            1e-14,
            t,
        )
        .unwrap()
        .value;
        let expected = model.coupling().scale(C64::new(re, im));
        // Composite-rule truncation goes as (dt * omega_c)^4.
        assert!(
            k.max_abs_diff(&expected) < 1e-7 * expected.max_abs(),
            "kernel deviates: {:.3e}",
            k.max_abs_diff(&expected)
        );
    }

    #[test]
    fn zero_coupling_matches_unitary_evolution() {
        let model = ModelSpec::new(
            ModelKind::SpinBoson,
            1.3,
            0.7,
            SpinJ::HALF,
            bath(0.0, 10.0, 1.0),
        )
        .unwrap();
        let rho0 = density_from_bloch(&BlochVector::new(1.0, 0.0, 0.0)).unwrap();
        let traj = redfield_integrate(&model, &rho0, 3.0, 0.01).unwrap();
        let h = model.hamiltonian();
        for &tau in &[0.5, 1.7, 3.0] {
            let numeric = traj.interpolate(tau).unwrap();
            let exact = evolve_unitary(&rho0, &h, tau).unwrap();
            assert!(
                numeric.matrix().max_abs_diff(exact.matrix()) < 1e-8,
                "tau = {tau}"
            );
        }
    }

    #[test]
    fn dephasing_offdiagonal_matches_exact_solution() {
        // Redfield is exact for pure dephasing up to discretization, so the
        // frame-removed off-diagonal magnitude must track exp(-gamma(t))
        // tightly even at G = 0.1.
        let model = dephasing_model(0.01);
        let rho0 = density_from_bloch(&BlochVector::new(1.0, 0.0, 0.0)).unwrap();
        let traj = redfield_integrate(&model, &rho0, 5.0, 0.01).unwrap();
        for &tau in &[1.0, 3.0, 5.0] {
            let numeric = frame_removed_state(&model, &traj, tau).unwrap();
            let exact = dephasing_propagate_qubit(&rho0, tau, &model.bath).unwrap();
            let got = numeric.get(0, 1).norm();
            let want = exact.get(0, 1).norm();
            assert!(
                ((got - want) / want).abs() < 2e-2,
                "tau = {tau}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn population_decay_matches_scalar_reduction_oracle() {
        // Independent route: for a diagonal state the full equation reduces
        // to one real ODE. Writing K(t) = a(t) sigma_x + b(t) sigma_y with
        //   a(t) = int_0^t C(u) cos(eps u) du,
        //   b(t) = int_0^t C(u) sin(eps u) du,
        // expanding [K rho, sigma_x] + h.c. for rho = (1 + n_z sigma_z)/2
        // gives n_z' = 4 Im b(t) - 4 n_z Re a(t). Integrate that scalar ODE
        // with its own RK4 and compare against the matrix machinery.
        let epsilon = 1.0;
        let b = bath(0.01, 50.0, 100.0);
        let model =
            ModelSpec::new(ModelKind::PopulationDecay, epsilon, 0.0, SpinJ::HALF, b).unwrap();
        let rho0 = density_from_bloch(&BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        let (t_max, dt) = (4.0, 0.002);
        let traj = redfield_integrate(&model, &rho0, t_max, dt).unwrap();

        // Scalar coefficients on the same half-step grid, by cumulative
        // Simpson pairs over a 4x finer sampling of C (only the even fine
        // indices are read below, so odd entries stay unset).
        let h = dt / 2.0;
        let refine = 4usize;
        let fine = h / refine as f64;
        let steps = (t_max / dt).round() as usize;
        let n_fine = 2 * steps * refine;
        let samples: Vec<(f64, f64)> = (0..=n_fine)
            .map(|k| {
                let u = k as f64 * fine;
                let c = correlation_series(&b, u).unwrap();
                (c.re * (epsilon * u).cos(), c.im * (epsilon * u).sin())
            })
            .collect();
        let mut re_a = vec![0.0f64; n_fine + 1];
        let mut im_b = vec![0.0f64; n_fine + 1];
        for k in (2..=n_fine).step_by(2) {
            re_a[k] = re_a[k - 2]
                + fine / 3.0 * (samples[k - 2].0 + 4.0 * samples[k - 1].0 + samples[k].0);
            im_b[k] = im_b[k - 2]
                + fine / 3.0 * (samples[k - 2].1 + 4.0 * samples[k - 1].1 + samples[k].1);
        }

        let mut nz = 1.0f64;
        let rhs = |nz: f64, k: usize| 4.0 * im_b[k] - 4.0 * nz * re_a[k];
        for step in 0..steps {
            let base = 2 * step * refine;
            let k1 = rhs(nz, base);
            let k2 = rhs(nz + 0.5 * dt * k1, base + refine);
            let k3 = rhs(nz + 0.5 * dt * k2, base + refine);
            let k4 = rhs(nz + dt * k3, base + 2 * refine);
            nz += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }

        let matrix_nz = bloch_from_density(traj.states().last().unwrap()).unwrap().z;
        assert!(
            (matrix_nz - nz).abs() < 1e-6,
            "matrix n_z({t_max}) = {matrix_nz} vs scalar oracle {nz}"
        );
    }

    #[test]
    fn population_decay_keeps_coherences_zero_and_relaxes() {
        let model = ModelSpec::new(
            ModelKind::PopulationDecay,
            1.0,
            0.0,
            SpinJ::HALF,
            bath(0.01, 50.0, 100.0),
        )
        .unwrap();
        let rho0 = density_from_bloch(&BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        let traj = redfield_integrate(&model, &rho0, 2.0, 0.002).unwrap();
        let late = frame_removed_state(&model, &traj, 2.0).unwrap();
        assert!(late.get(0, 1).norm() < 1e-14);
        let n = bloch_from_density(&late).unwrap();
        assert!(n.z < 1.0 && n.z > 0.5, "n_z(2) = {}", n.z);
        // monotone decrease of n_z
        let mut prev = 1.0;
        for state in traj.states().iter().skip(1) {
            let nz = bloch_from_density(state).unwrap().z;
            assert!(nz <= prev + 1e-12);
            prev = nz;
        }
        assert!(traj.max_trace_drift() < tol::TRACE_DRIFT);
    }

    #[test]
    fn frame_removal_at_zero_returns_initial_state() {
        let model = dephasing_model(0.05);
        let rho0 = density_from_bloch(&BlochVector::new(0.5, 0.5, 0.5)).unwrap();
        let traj = redfield_integrate(&model, &rho0, 1.0, 0.01).unwrap();
        let at0 = frame_removed_state(&model, &traj, 0.0).unwrap();
        assert!(at0.matrix().approx_eq(rho0.matrix(), 1e-12));
    }

    #[test]
    fn dephasing_frame_removed_diagonal_constant() {
        let model = dephasing_model(0.1);
        let rho0 = density_from_bloch(&BlochVector::new(0.6, 0.0, 0.8)).unwrap();
        let traj = redfield_integrate(&model, &rho0, 2.0, 0.01).unwrap();
        for &tau in &[0.5, 1.0, 2.0] {
            let state = frame_removed_state(&model, &traj, tau).unwrap();
            assert!((state.get(0, 0) - rho0.get(0, 0)).norm() < 1e-10);
            assert!((state.get(1, 1) - rho0.get(1, 1)).norm() < 1e-10);
        }
    }

    #[test]
    fn rejects_unresolvable_step() {
        let model = ModelSpec::new(
            ModelKind::PopulationDecay,
            1.0,
            0.0,
            SpinJ::HALF,
            bath(0.01, 50.0, 100.0),
        )
        .unwrap();
        let rho0 = density_from_bloch(&BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        match redfield_integrate(&model, &rho0, 1.0, 0.02) {
            Err(Error::StepSizeTooCoarse { suggested, .. }) => {
                assert!((suggested - 0.002).abs() < 1e-12);
            }
            other => panic!("expected step-size rejection, got {other:?}"),
        }
    }

    #[test]
    fn halving_dt_barely_changes_states() {
        let model = dephasing_model(0.1);
        let rho0 = density_from_bloch(&BlochVector::new(0.5, 0.5, 0.5)).unwrap();
        let coarse = redfield_integrate(&model, &rho0, 2.0, 0.01).unwrap();
        let fine = redfield_integrate(&model, &rho0, 2.0, 0.005).unwrap();
        for (k, state) in coarse.states().iter().enumerate() {
            let matching = &fine.states()[2 * k];
            assert!(state.matrix().max_abs_diff(matching.matrix()) < 1e-6);
        }
    }
}
