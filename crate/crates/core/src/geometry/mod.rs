//! Rigid-body geometry: transforms, signed dihedrals, and the
//! internal-coordinate fragment attachment that grows the molecule.

mod attach;
mod vec3;

pub use attach::{attach_fragment, min_cross_distance, AnchorPair, Attachment, RotationStatus};
pub use vec3::{standard_normal, Mat3, RigidTransform, Vec3};

use std::f64::consts::PI;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum GeometryError {
    #[error("dihedral axis is degenerate (p2 == p3)")]
    DegenerateAxis,
    #[error("dihedral outer point is collinear with the axis")]
    CollinearPoint,
    #[error("anchor pair invalid: {0}")]
    BadAnchor(#[from] crate::chem::ChemError),
    #[error("operation requires non-empty clouds")]
    EmptyCloud,
    #[error("distance must be positive and finite, got {0}")]
    BadDistance(f64),
    #[error("|phi| must lie in [0, pi], got {0}")]
    BadAngle(f64),
}

/// Wrap an angle into (-pi, pi].
pub fn wrap_angle(a: f64) -> f64 {
    let mut x = a.rem_euclid(2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    x
}

/// Signed torsion p1-p2-p3-p4 with the cis = 0 convention, in [-pi, pi].
///
/// Computed with the two-cross-product atan2 form; the sign is fixed so that
/// rotating p4 about the p2->p3 axis by +a (right-hand rule) increases the
/// torsion by +a. The value is invariant under reversing the argument order
/// and flips sign under mirror reflection.
pub fn measure_dihedral(p1: Vec3, p2: Vec3, p3: Vec3, p4: Vec3) -> Result<f64, GeometryError> {
    let b1 = p2 - p1;
    let b2 = p3 - p2;
    let b3 = p4 - p3;
    let axis_len = b2.norm();
    if axis_len < 1e-12 {
        return Err(GeometryError::DegenerateAxis);
    }
    let n1 = b1.cross(b2);
    let n2 = b2.cross(b3);
    if n1.norm() < 1e-10 || n2.norm() < 1e-10 {
        return Err(GeometryError::CollinearPoint);
    }
    let y = n1.cross(n2).dot(b2 / axis_len);
    let x = n1.dot(n2);
    let phi = y.atan2(x);
    // atan2(-0.0, x<0) yields -pi; report the boundary as +pi
    Ok(if phi == -PI { PI } else { phi })
}

/// All pairwise distances preserved within 1e-9 by construction.
pub fn rigid_transform_apply(t: &RigidTransform, cloud: &crate::chem::AtomCloud) -> crate::chem::AtomCloud {
    cloud.transformed(t)
}
