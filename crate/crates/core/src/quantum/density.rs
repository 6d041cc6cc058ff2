use num_complex::Complex64 as C64;

use super::bloch::BlochVector;
use super::matrix::ComplexMatrix;
use super::spin::pauli;
use crate::error::Error;
use crate::tol;
use crate::Result;

/// Hermitian, unit-trace matrix representing a system state.
///
/// Hermiticity and trace are validated at construction against
/// [`tol::STRUCTURAL`]. Positivity is not checked on every construction
/// (the Redfield integrator may produce eigenvalues slightly below zero);
/// use [`DensityMatrix::min_eigenvalue`] for diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let residual = matrix.hermiticity_residual();
        if residual > tol::STRUCTURAL {
            return Err(Error::InvalidDensityMatrix(format!(
                "hermiticity residual {residual:.3e} exceeds {:.1e}",
                tol::STRUCTURAL
            )));
        }
        let tr = matrix.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tol::STRUCTURAL {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace {tr} deviates from 1 beyond {:.1e}",
                tol::STRUCTURAL
            )));
        }
        Ok(Self {
            matrix: matrix.hermitize(),
        })
    }

    /// Pure-state projector |psi><psi| from a unit-norm state vector.
    pub fn from_state_vector(state: &[C64]) -> Result<Self> {
        let norm_sqr: f64 = state.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > tol::STRUCTURAL {
            return Err(Error::InvalidArgument(format!(
                "state vector norm^2 = {norm_sqr} is not 1"
            )));
        }
        let dim = state.len();
        Self::new(ComplexMatrix::from_fn(dim, |i, j| {
            state[i] * state[j].conj()
        }))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.matrix.get(i, j)
    }

    /// Expectation value Tr(op * rho).
    pub fn expectation(&self, op: &ComplexMatrix) -> C64 {
        op.mul(&self.matrix).trace()
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let eig = self.matrix.hermitian_eigen()?;
        Ok(eig.values[0])
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.matrix.hermitian_eigen()?.values)
    }
}

/// Bloch vector of a qubit state: n_i = Tr(sigma_i rho).
pub fn bloch_from_density(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "Bloch decomposition needs a 2x2 density matrix, got {}x{0}",
            rho.dim()
        )));
    }
    let (sx, sy, sz) = pauli();
    Ok(BlochVector::new(
        rho.expectation(&sx).re,
        rho.expectation(&sy).re,
        rho.expectation(&sz).re,
    ))
}

/// Qubit state (identity + n . sigma) / 2; rejects |n| > 1 beyond tolerance.
pub fn density_from_bloch(n: &BlochVector) -> Result<DensityMatrix> {
    let norm = n.norm();
    if norm > 1.0 + tol::STRUCTURAL {
        return Err(Error::InvalidArgument(format!(
            "Bloch vector norm {norm} exceeds 1"
        )));
    }
    let (sx, sy, sz) = pauli();
    let m = ComplexMatrix::identity(2)
        .add(&sx.scale_re(n.x))
        .add(&sy.scale_re(n.y))
        .add(&sz.scale_re(n.z))
        .scale_re(0.5);
    DensityMatrix::new(m)
}

/// Unitary conjugation rho -> exp(-i H t) rho exp(+i H t), computed through
/// the eigendecomposition of the Hermitian generator. A call with negative t
/// strips free system evolution accumulated over |t|.
pub fn evolve_unitary(rho: &DensityMatrix, h: &ComplexMatrix, t: f64) -> Result<DensityMatrix> {
    if h.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "Hamiltonian dim {} vs state dim {}",
            h.dim(),
            rho.dim()
        )));
    }
    let eig = h.hermitian_eigen()?;
    let u = eig.map(|l| (C64::new(0.0, -1.0) * l * t).exp());
    let evolved = u.mul(rho.matrix()).mul(&u.adjoint()).hermitize();
    DensityMatrix::new(evolved)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn maximally_mixed_maps_to_zero_vector() {
        let rho = DensityMatrix::new(ComplexMatrix::identity(2).scale_re(0.5)).unwrap();
        let n = bloch_from_density(&rho).unwrap();
        assert!(n.norm() < 1e-15);
    }

    #[test]
    fn pole_state_maps_to_unit_z() {
        let up = [c(1.0, 0.0), c(0.0, 0.0)];
        let rho = DensityMatrix::from_state_vector(&up).unwrap();
        let n = bloch_from_density(&rho).unwrap();
        assert!((n.z - 1.0).abs() < 1e-15 && n.x.abs() < 1e-15 && n.y.abs() < 1e-15);
    }

    #[test]
    fn x_polarized_mixture() {
        // rho = (1 + 0.3 sigma_x)/2 has Bloch vector (0.3, 0, 0).
        let (sx, _, _) = pauli();
        let m = ComplexMatrix::identity(2)
            .add(&sx.scale_re(0.3))
            .scale_re(0.5);
        let n = bloch_from_density(&DensityMatrix::new(m).unwrap()).unwrap();
        assert!((n.x - 0.3).abs() < 1e-15 && n.y.abs() < 1e-15 && n.z.abs() < 1e-15);
    }

    #[test]
    fn bloch_round_trip_on_random_states() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..1000 {
            let dir = BlochVector::from_angles(
                rng.gen_range(0.0..std::f64::consts::PI),
                rng.gen_range(0.0..std::f64::consts::TAU),
            );
            let n = dir.scale(rng.gen_range(0.0..1.0));
            let rho = density_from_bloch(&n).unwrap();
            let back = bloch_from_density(&rho).unwrap();
            assert!((back.x - n.x).abs() < 1e-10);
            assert!((back.y - n.y).abs() < 1e-10);
            assert!((back.z - n.z).abs() < 1e-10);
            assert!((rho.matrix().trace() - c(1.0, 0.0)).norm() < 1e-9);
            assert!(rho.matrix().hermiticity_residual() < 1e-9);
        }
    }

    #[test]
    fn rejects_super_unit_bloch_vector() {
        let n = BlochVector::new(0.9, 0.9, 0.9);
        assert!(density_from_bloch(&n).is_err());
    }

    #[test]
    fn bloch_decomposition_needs_dim_two() {
        let rho3 = DensityMatrix::new(ComplexMatrix::identity(3).scale_re(1.0 / 3.0)).unwrap();
        assert!(bloch_from_density(&rho3).is_err());
    }

    #[test]
    fn pure_iff_unit_norm() {
        let pure = density_from_bloch(&BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        let evals = pure.eigenvalues().unwrap();
        assert!(evals[0].abs() < 1e-12 && (evals[1] - 1.0).abs() < 1e-12);

        let mixed = density_from_bloch(&BlochVector::new(0.3, 0.0, 0.0)).unwrap();
        let evals = mixed.eigenvalues().unwrap();
        assert!(evals[0] > 0.1);
    }

    #[test]
    fn unitary_evolution_is_trivial_at_t_zero_and_for_eigenstates() {
        let up = DensityMatrix::from_state_vector(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let (_, _, sz) = pauli();
        let h = sz.scale_re(0.5 * 1.7);

        let same = evolve_unitary(&up, &h, 0.0).unwrap();
        assert!(same.matrix().approx_eq(up.matrix(), 1e-15));

        let later = evolve_unitary(&up, &h, 12.3).unwrap();
        assert!(later.matrix().approx_eq(up.matrix(), 1e-12));
    }

    #[test]
    fn rotation_about_x_matches_analytic_exponential() {
        // Oracle: exp(-i sigma_x t) = cos(t) I - i sin(t) sigma_x, so the
        // Bloch vector rotates about +x by angle 2t.
        let (sx, _, _) = pauli();
        let rho0 = density_from_bloch(&BlochVector::new(0.0, 0.0, 1.0)).unwrap();

        // 2t = pi/2: (0,0,1) -> (0,-1,0).
        let quarter = evolve_unitary(&rho0, &sx, std::f64::consts::FRAC_PI_4).unwrap();
        let n = bloch_from_density(&quarter).unwrap();
        assert!(n.x.abs() < 1e-10 && (n.y + 1.0).abs() < 1e-10 && n.z.abs() < 1e-10);

        // 2t = pi: (0,0,1) -> (0,0,-1).
        let half = evolve_unitary(&rho0, &sx, std::f64::consts::FRAC_PI_2).unwrap();
        let n = bloch_from_density(&half).unwrap();
        assert!(n.x.abs() < 1e-10 && n.y.abs() < 1e-10 && (n.z + 1.0).abs() < 1e-10);
    }

    #[test]
    fn unitary_evolution_preserves_eigenvalues() {
        let mut rng = StdRng::seed_from_u64(11);
        let h = ComplexMatrix::from_rows(&[
            vec![c(0.4, 0.0), c(0.3, -0.2)],
            vec![c(0.3, 0.2), c(-1.1, 0.0)],
        ]);
        for _ in 0..20 {
            let dir = BlochVector::from_angles(
                rng.gen_range(0.0..std::f64::consts::PI),
                rng.gen_range(0.0..std::f64::consts::TAU),
            );
            let n = dir.scale(rng.gen_range(0.0..1.0));
            let rho = density_from_bloch(&n).unwrap();
            let before = rho.eigenvalues().unwrap();
            let after = evolve_unitary(&rho, &h, rng.gen_range(0.0..10.0))
                .unwrap()
                .eigenvalues()
                .unwrap();
            for (b, a) in before.iter().zip(after.iter()) {
                assert!((b - a).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn rejects_non_hermitian_generator() {
        let rho = DensityMatrix::new(ComplexMatrix::identity(2).scale_re(0.5)).unwrap();
        let bad = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ]);
        assert!(evolve_unitary(&rho, &bad, 1.0).is_err());
    }
}
