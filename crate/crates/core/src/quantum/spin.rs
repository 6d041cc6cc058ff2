use num_complex::Complex64 as C64;

use super::matrix::ComplexMatrix;
use crate::error::Error;
use crate::Result;

/// Half-integer spin quantum number, stored as 2J to keep it exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinJ {
    twice: u32,
}

impl SpinJ {
    pub const HALF: SpinJ = SpinJ { twice: 1 };

    pub fn from_twice(twice: u32) -> Self {
        Self { twice }
    }

    /// Accepts values within 1e-9 of an integer or half-integer.
    pub fn try_from_f64(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        let rounded = twice.round();
        if j < 0.0 || (twice - rounded).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "J = {j} is not a non-negative half-integer"
            )));
        }
        Ok(Self {
            twice: rounded as u32,
        })
    }

    pub fn value(&self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn twice(&self) -> u32 {
        self.twice
    }

    /// Hilbert-space dimension 2J + 1.
    pub fn dim(&self) -> usize {
        self.twice as usize + 1
    }

    /// Magnetic quantum number at row `i` under the m = J, J-1, ..., -J
    /// basis ordering used throughout.
    pub fn m_at(&self, i: usize) -> f64 {
        self.value() - i as f64
    }
}

/// Pauli matrices in the (|up_z>, |down_z>) basis.
pub fn pauli() -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let c = C64::new;
    let sx = ComplexMatrix::from_rows(&[
        vec![c(0.0, 0.0), c(1.0, 0.0)],
        vec![c(1.0, 0.0), c(0.0, 0.0)],
    ]);
    let sy = ComplexMatrix::from_rows(&[
        vec![c(0.0, 0.0), c(0.0, -1.0)],
        vec![c(0.0, 1.0), c(0.0, 0.0)],
    ]);
    let sz = ComplexMatrix::from_rows(&[
        vec![c(1.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(-1.0, 0.0)],
    ]);
    (sx, sy, sz)
}

/// Angular momentum operators (Jx, Jy, Jz) in the Jz eigenbasis ordered
/// m = J ... -J.
pub fn angular_momentum(j: SpinJ) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let dim = j.dim();
    let jv = j.value();

    let jz = ComplexMatrix::from_fn(dim, |i, k| {
        if i == k {
            C64::new(j.m_at(i), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });

    // <m+1| J+ |m> = sqrt(J(J+1) - m(m+1)); with our ordering m+1 sits one
    // row above m, so J+ has entries on the superdiagonal.
    let mut jp = ComplexMatrix::zeros(dim);
    for i in 1..dim {
        let m = j.m_at(i);
        let val = (jv * (jv + 1.0) - m * (m + 1.0)).sqrt();
        jp.set(i - 1, i, C64::new(val, 0.0));
    }
    let jm = jp.adjoint();

    let jx = jp.add(&jm).scale_re(0.5);
    let jy = jp.sub(&jm).scale(C64::new(0.0, -0.5));
    (jx, jy, jz)
}

/// SU(2) coherent-state label: spin J and sphere angles with
/// zeta = exp(i phi) tan(theta / 2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentStateSpec {
    pub j: SpinJ,
    pub theta: f64,
    pub phi: f64,
}

impl CoherentStateSpec {
    pub fn new(j: SpinJ, theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::PI).contains(&theta) || !theta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "theta = {theta} outside [0, pi]"
            )));
        }
        if !phi.is_finite() {
            return Err(Error::InvalidArgument(format!("phi = {phi} not finite")));
        }
        Ok(Self { j, theta, phi })
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 1..=k {
        acc = acc * ((n - k + i) as f64) / (i as f64);
    }
    acc
}

/// Coherent state amplitudes on |J, m> for m = J ... -J (matching the
/// operator basis ordering).
///
/// The amplitude on |J, m> carries the weight
/// (1 + |zeta|^2)^(-J) sqrt(C(2J, J+m)) zeta^(J+m), evaluated in the
/// numerically equivalent form cos(theta/2)^(J-m) sin(theta/2)^(J+m)
/// exp(i phi (J+m)), which is stable through theta = pi. The state at
/// theta = 0 is |J, -J>; at theta = pi it concentrates on m = J.
pub fn coherent_state(spec: &CoherentStateSpec) -> Vec<C64> {
    let j = spec.j;
    let dim = j.dim();
    let two_j = j.twice();

    // tan(theta/2) blows up at theta = pi; return the m = J basis state
    // (with its limiting phase) directly near the pole.
    if spec.theta > std::f64::consts::PI - 1e-6 {
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[0] = (C64::new(0.0, 1.0) * (two_j as f64) * spec.phi).exp();
        return v;
    }

    let half = 0.5 * spec.theta;
    let (sin_h, cos_h) = (half.sin(), half.cos());
    let mut v = Vec::with_capacity(dim);
    for i in 0..dim {
        // index i holds m = J - i, so J + m = 2J - i.
        let k = two_j as usize - i;
        let weight = binomial(two_j, k as u32).sqrt()
            * cos_h.powi((two_j as usize - k) as i32)
            * sin_h.powi(k as i32);
        let phase = (C64::new(0.0, 1.0) * spec.phi * k as f64).exp();
        v.push(phase * weight);
    }
    v
}

/// <a|b> for two state vectors of equal length.
pub fn state_overlap(a: &[C64], b: &[C64]) -> C64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}
