use std::ops::Mul;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-12;

/// A point of `S^3` viewed as a unit quaternion `w + xi + yj + zk`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitQuaternion {
    w: f64,
    x: f64,
    y: f64,
    z: f64,
}

impl UnitQuaternion {
    pub const IDENTITY: Self = Self {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    /// Normalizes `(w, x, y, z)` unless it is already unit within tolerance;
    /// rejects the zero vector.
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        if !n.is_finite() || n < NORM_TOL {
            return Err(Error::InvalidArgument("quaternion must be nonzero and finite".into()));
        }
        if (n - 1.0).abs() <= NORM_TOL {
            return Ok(Self { w, x, y, z });
        }
        Ok(Self {
            w: w / n,
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    pub fn from_array(a: [f64; 4]) -> Result<Self> {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn uniform<R: Rng>(rng: &mut R) -> Self {
        loop {
            let a: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            if let Ok(q) = Self::from_array(a) {
                return q;
            }
        }
    }

    pub fn conj(self) -> Self {
        Self {
            w: self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    pub fn neg(self) -> Self {
        Self {
            w: -self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    pub fn dot(self, o: Self) -> f64 {
        self.w * o.w + self.x * o.x + self.y * o.y + self.z * o.z
    }

    /// Geodesic distance on `S^3`.
    pub fn distance(self, o: Self) -> f64 {
        self.dot(o).clamp(-1.0, 1.0).acos()
    }
}

impl Mul for UnitQuaternion {
    type Output = Self;

    fn mul(self, o: Self) -> Self {
        let (a, b) = (self, o);
        Self::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
        .expect("product of unit quaternions is nonzero")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamilton_rules() {
        let i = UnitQuaternion::new(0.0, 1.0, 0.0, 0.0).unwrap();
        let j = UnitQuaternion::new(0.0, 0.0, 1.0, 0.0).unwrap();
        let k = UnitQuaternion::new(0.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(i * j, k);
        assert_eq!(j * i, k.neg());
        assert_eq!((i * i).to_array(), [-1.0, 0.0, 0.0, 0.0]);
        assert_eq!(i * i.conj(), UnitQuaternion::IDENTITY);
    }

    #[test]
    fn normalizes() {
        let q = UnitQuaternion::new(3.0, 0.0, 4.0, 0.0).unwrap();
        assert_eq!(q.to_array(), [0.6, 0.0, 0.8, 0.0]);
        assert!(UnitQuaternion::new(0.0, 0.0, 0.0, 0.0).is_err());
    }
}
