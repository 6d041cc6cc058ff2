/// Real 3-vector describing a qubit state or projector on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn scale(&self, f: f64) -> Self {
        Self::new(self.x * f, self.y * f, self.z * f)
    }

    /// Unit vector in the same direction; `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale(1.0 / n))
    }

    /// Unit vector from standard spherical angles (polar from +z, azimuth
    /// from +x).
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self::new(
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        )
    }

    /// Standard spherical angles (theta, phi) with phi normalized to
    /// [0, 2*pi). The zero vector maps to (0, 0).
    pub fn to_angles(&self) -> (f64, f64) {
        let n = self.norm();
        if n == 0.0 {
            return (0.0, 0.0);
        }
        let theta = (self.z / n).clamp(-1.0, 1.0).acos();
        let mut phi = self.y.atan2(self.x);
        if phi < 0.0 {
            phi += std::f64::consts::TAU;
        }
        (theta, phi)
    }
}
