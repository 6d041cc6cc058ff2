use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::Error;
use crate::tol;
use crate::Result;

/// Dense square complex matrix. All operator algebra in the crate runs
/// through this type; dimensions stay small (<= ~20) so everything is direct.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    data: Array2<C64>,
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues in ascending
/// order, eigenvectors as the columns of a unitary matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be >= 1");
        Self {
            data: Array2::zeros((dim, dim)),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        assert!(dim >= 1, "matrix dimension must be >= 1");
        Self {
            data: Array2::from_shape_fn((dim, dim), |(i, j)| f(i, j)),
        }
    }

    /// Build from row-major rows; panics if the rows are not square.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let dim = rows.len();
        assert!(dim >= 1 && rows.iter().all(|r| r.len() == dim));
        Self::from_fn(dim, |i, j| rows[i][j])
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[(i, j)] = v;
    }

    pub fn array(&self) -> &Array2<C64> {
        &self.data
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "matrix product dimension mismatch");
        Self {
            data: self.data.dot(&other.data),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            data: &self.data + &other.data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            data: &self.data - &other.data,
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            data: self.data.mapv(|v| v * factor),
        }
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        let dim = self.dim();
        Self::from_fn(dim, |i, j| self.data[(j, i)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.data[(i, i)]).sum()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Apply `v -> self * v` to a column vector.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim());
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.data[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Largest entrywise |self - other|.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Equality up to an explicit absolute tolerance.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim() == other.dim() && self.max_abs_diff(other) <= tol
    }

    /// Largest |A_ij - conj(A_ji)|.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for i in 0..self.dim() {
            for j in i..self.dim() {
                r = r.max((self.data[(i, j)] - self.data[(j, i)].conj()).norm());
            }
        }
        r
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    /// Project onto the Hermitian part, (A + A^dagger)/2.
    pub fn hermitize(&self) -> Self {
        let dim = self.dim();
        Self::from_fn(dim, |i, j| {
            (self.data[(i, j)] + self.data[(j, i)].conj()) * 0.5
        })
    }

    /// Eigendecomposition via cyclic Jacobi rotations. Rejects non-Hermitian
    /// input; accuracy is limited only by rounding for the dimensions used
    /// here.
    pub fn hermitian_eigen(&self) -> Result<HermitianEigen> {
        let residual = self.hermiticity_residual();
        let scale = self.max_abs().max(1.0);
        if residual > tol::STRUCTURAL * scale {
            return Err(Error::NotHermitian {
                residual,
                tol: tol::STRUCTURAL,
            });
        }

        let n = self.dim();
        let mut a = self.hermitize().data;
        let mut v = Array2::<C64>::eye(n);

        let off = |m: &Array2<C64>| -> f64 {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        s += m[(i, j)].norm_sqr();
                    }
                }
            }
            s.sqrt()
        };
        let frob = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt().max(1.0);

        for _sweep in 0..100 {
            if off(&a) <= 1e-14 * frob {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    if apq.norm() <= 1e-300 {
                        continue;
                    }
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    let phase = apq / apq.norm();
                    let theta = 0.5 * (2.0 * apq.norm()).atan2(app - aqq);
                    let c = theta.cos();
                    let s = theta.sin();
                    let s_pos = phase * s; // U[p][q] = -s_pos, U[q][p] = conj(phase) * s

                    // A <- U^dagger A U with U acting on the (p, q) plane.
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = akp * c + akq * s_pos.conj();
                        a[(k, q)] = akq * c - akp * s_pos;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = apk * c + aqk * s_pos;
                        a[(q, k)] = aqk * c - apk * s_pos.conj();
                    }
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * c + vkq * s_pos.conj();
                        v[(k, q)] = vkq * c - vkp * s_pos;
                    }
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
        let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
        let vectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
        Ok(HermitianEigen { values, vectors })
    }
}

impl HermitianEigen {
    /// Reassemble `f(A)` as `V diag(f(lambda)) V^dagger`.
    pub fn map(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let n = self.values.len();
        let fv: Vec<C64> = self.values.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| self.vectors.get(i, k) * fv[k] * self.vectors.get(j, k).conj())
                .sum()
        })
    }
}
