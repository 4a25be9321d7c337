//! Minimal 3-vector / 3x3-matrix arithmetic for rigid-body geometry.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * o.z - self.z * o.y,
            y: self.z * o.x - self.x * o.z,
            z: self.x * o.y - self.y * o.x,
        }
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Vec3 {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize a zero vector");
        self / n
    }

    pub fn distance(self, o: Vec3) -> f64 {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Any unit vector perpendicular to `self` (which must be non-zero).
    pub fn any_perpendicular(self) -> Vec3 {
        let axis = if self.x.abs() <= self.y.abs() && self.x.abs() <= self.z.abs() {
            Vec3::new(1.0, 0.0, 0.0)
        } else if self.y.abs() <= self.z.abs() {
            Vec3::new(0.0, 1.0, 0.0)
        } else {
            Vec3::new(0.0, 0.0, 1.0)
        };
        self.cross(axis).normalized()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

/// Row-major 3x3 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat3 {
    pub rows: [[f64; 3]; 3],
}

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3 {
        rows: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };

    /// Rotation by `angle` radians about the unit axis, right-hand rule
    /// (Rodrigues form).
    pub fn rotation(axis: Vec3, angle: f64) -> Mat3 {
        let a = axis.normalized();
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        Mat3 {
            rows: [
                [t * a.x * a.x + c, t * a.x * a.y - s * a.z, t * a.x * a.z + s * a.y],
                [t * a.x * a.y + s * a.z, t * a.y * a.y + c, t * a.y * a.z - s * a.x],
                [t * a.x * a.z - s * a.y, t * a.y * a.z + s * a.x, t * a.z * a.z + c],
            ],
        }
    }

    /// The rotation taking unit vector `from` onto unit vector `to`.
    pub fn rotation_between(from: Vec3, to: Vec3) -> Mat3 {
        let f = from.normalized();
        let t = to.normalized();
        let c = f.dot(t).clamp(-1.0, 1.0);
        let axis = f.cross(t);
        let n = axis.norm();
        if n < 1e-12 {
            if c > 0.0 {
                return Mat3::IDENTITY;
            }
            // antiparallel: rotate by pi about any perpendicular axis
            return Mat3::rotation(f.any_perpendicular(), std::f64::consts::PI);
        }
        Mat3::rotation(axis / n, n.atan2(c))
    }

    pub fn apply(&self, v: Vec3) -> Vec3 {
        let r = &self.rows;
        Vec3::new(
            r[0][0] * v.x + r[0][1] * v.y + r[0][2] * v.z,
            r[1][0] * v.x + r[1][1] * v.y + r[1][2] * v.z,
            r[2][0] * v.x + r[2][1] * v.y + r[2][2] * v.z,
        )
    }

    pub fn matmul(&self, o: &Mat3) -> Mat3 {
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    out[i][j] += self.rows[i][k] * o.rows[k][j];
                }
            }
        }
        Mat3 { rows: out }
    }

    pub fn transpose(&self) -> Mat3 {
        let r = &self.rows;
        Mat3 {
            rows: [
                [r[0][0], r[1][0], r[2][0]],
                [r[0][1], r[1][1], r[2][1]],
                [r[0][2], r[1][2], r[2][2]],
            ],
        }
    }

    pub fn det(&self) -> f64 {
        let r = &self.rows;
        r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
            - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
            + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
    }

    /// Max absolute entry of R*R^T - I.
    pub fn orthonormal_defect(&self) -> f64 {
        let p = self.matmul(&self.transpose());
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((p.rows[i][j] - target).abs());
            }
        }
        worst
    }
}

/// A proper rigid motion: rotation followed by translation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RigidTransform {
    pub rotation: Mat3,
    pub translation: Vec3,
}

impl RigidTransform {
    pub const IDENTITY: RigidTransform = RigidTransform {
        rotation: Mat3::IDENTITY,
        translation: Vec3::ZERO,
    };

    pub fn new(rotation: Mat3, translation: Vec3) -> Self {
        debug_assert!(rotation.orthonormal_defect() < 1e-10, "rotation not orthonormal");
        debug_assert!(rotation.det() > 0.0, "reflection is not a rigid motion");
        RigidTransform { rotation, translation }
    }

    pub fn translation(v: Vec3) -> Self {
        RigidTransform { rotation: Mat3::IDENTITY, translation: v }
    }

    /// Rotation about an axis through `origin` rather than through zero.
    pub fn rotation_about(origin: Vec3, axis: Vec3, angle: f64) -> Self {
        let rot = Mat3::rotation(axis, angle);
        let translation = origin - rot.apply(origin);
        RigidTransform { rotation: rot, translation }
    }

    pub fn apply(&self, v: Vec3) -> Vec3 {
        self.rotation.apply(v) + self.translation
    }

    /// self ∘ other (apply `other` first).
    pub fn compose(&self, other: &RigidTransform) -> RigidTransform {
        RigidTransform {
            rotation: self.rotation.matmul(&other.rotation),
            translation: self.rotation.apply(other.translation) + self.translation,
        }
    }

    /// Uniformly random rotation plus a translation drawn from `tr_scale * N(0,1)^3`.
    pub fn random<R: rand::Rng>(rng: &mut R, tr_scale: f64) -> Self {
        let axis = loop {
            let v = Vec3::new(standard_normal(rng), standard_normal(rng), standard_normal(rng));
            if v.norm() > 1e-6 {
                break v.normalized();
            }
        };
        let angle = rng.gen_range(0.0..std::f64::consts::TAU);
        let translation =
            Vec3::new(standard_normal(rng), standard_normal(rng), standard_normal(rng)) * tr_scale;
        RigidTransform { rotation: Mat3::rotation(axis, angle), translation }
    }
}

/// Box-Muller standard normal.
pub fn standard_normal<R: rand::Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_90_about_z() {
        let r = Mat3::rotation(Vec3::new(0.0, 0.0, 1.0), std::f64::consts::FRAC_PI_2);
        let v = r.apply(Vec3::new(1.0, 0.0, 0.0));
        assert!((v - Vec3::new(0.0, 1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn rotation_between_antiparallel() {
        let a = Vec3::new(0.0, 1.0, 0.0);
        let r = Mat3::rotation_between(a, -a);
        assert!((r.apply(a) + a).norm() < 1e-12);
        assert!(r.orthonormal_defect() < 1e-12);
        assert!((r.det() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn compose_matches_sequential_application() {
        let mut rng = make_rng(7);
        let a = RigidTransform::random(&mut rng, 2.0);
        let b = RigidTransform::random(&mut rng, 2.0);
        let v = Vec3::new(0.3, -1.2, 0.8);
        let lhs = a.compose(&b).apply(v);
        let rhs = a.apply(b.apply(v));
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn random_transform_is_rigid() {
        let mut rng = make_rng(3);
        for _ in 0..50 {
            let t = RigidTransform::random(&mut rng, 5.0);
            assert!(t.rotation.orthonormal_defect() < 1e-10);
            assert!((t.rotation.det() - 1.0).abs() < 1e-10);
            let a = Vec3::new(1.0, 2.0, 3.0);
            let b = Vec3::new(-0.5, 0.1, 2.0);
            assert!((t.apply(a).distance(t.apply(b)) - a.distance(b)).abs() < 1e-9);
        }
    }

    #[test]
    fn rotation_about_keeps_origin_fixed() {
        let origin = Vec3::new(1.0, 2.0, 3.0);
        let t = RigidTransform::rotation_about(origin, Vec3::new(0.0, 1.0, 0.0), 1.234);
        assert!((t.apply(origin) - origin).norm() < 1e-12);
    }

    pub(super) fn make_rng(seed: u64) -> impl rand::Rng {
        use rand::SeedableRng;
        rand_chacha::ChaCha8Rng::seed_from_u64(seed)
    }
}
