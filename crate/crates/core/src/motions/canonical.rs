use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use super::curve::Pitch;
use crate::algebra::DualQuaternion;
use crate::error::Result;
use crate::posemodels::{matrix_to_dq, validate_pose, PoseMatrix};
use crate::tolerance::Tolerance;

/// A fixed line given by a point and a unit direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Axis {
    pub point: [f64; 3],
    pub direction: [f64; 3],
}

impl Axis {
    pub fn new(point: Vector3<f64>, direction: Vector3<f64>) -> Self {
        Self {
            point: point.into(),
            direction: direction.normalize().into(),
        }
    }

    pub fn point(&self) -> Vector3<f64> {
        Vector3::from(self.point)
    }

    pub fn direction(&self) -> Vector3<f64> {
        Vector3::from(self.direction)
    }

    /// Angle between the directions plus the distance of this axis' point to
    /// `other`.
    pub fn deviation(&self, other: &Axis) -> f64 {
        let u = other.direction();
        let w = self.point() - other.point();
        let dist = (w - u * w.dot(&u)).norm();
        (1.0 - self.direction().dot(&u).abs()).max(0.0).sqrt() + dist
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScrewInvariants {
    pub axis: Axis,
    /// Rotation angle in `[0, π]`.
    pub angle: f64,
    /// Signed translation along the axis direction.
    pub translation: f64,
    pub pitch: Pitch,
}

/// Screw decomposition of a displacement.
pub fn screw_invariants(pose: &PoseMatrix, tol: Tolerance) -> Result<ScrewInvariants> {
    let mut h = matrix_to_dq(pose, tol)?;
    if h.p.w < 0.0 {
        h = -h;
    }
    let v = h.p.vector();
    let s = v.norm();
    let a = pose.translation;
    let (axis, angle, translation) = if s <= 1e-12 {
        let n = a.norm();
        let u = if n > tol.get() { a / n } else { Vector3::z() };
        (Axis::new(Vector3::zeros(), u), 0.0, n)
    } else {
        let u = v / s;
        let angle = 2.0 * s.atan2(h.p.w);
        let d = a.dot(&u);
        let perp = a - u * d;
        let cot = h.p.w / s;
        let c = 0.5 * (perp + u.cross(&perp) * cot);
        (Axis::new(c, u), angle, d)
    };
    let pitch = Pitch::from_rates(angle, translation, tol);
    Ok(ScrewInvariants {
        axis,
        angle,
        translation,
        pitch,
    })
}

/// Rigid frame whose third axis is `axis`: origin at the axis point, first
/// axis along the coordinate direction least aligned with the axis.
pub fn frame_for_axis(axis: &Axis) -> PoseMatrix {
    let u = axis.direction();
    let k = (0..3).min_by(|i, j| u[*i].abs().total_cmp(&u[*j].abs())).unwrap();
    let mut e = Vector3::zeros();
    e[k] = 1.0;
    let e1 = (e - u * e.dot(&u)).normalize();
    let e2 = u.cross(&e1);
    PoseMatrix::new(Matrix3::from_columns(&[e1, e2, u]), axis.point())
}

/// Two poses with the frame change that makes their relative displacement a
/// screw about the third coordinate axis.
///
/// `A⁻¹ B = S · B₀(φ, d) · S⁻¹`, so a canonical motion `C₀(t)` from the
/// identity to `B₀` is carried to `A · S · C₀(t) · S⁻¹` from `A` to `B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalPair {
    pub frame: PoseMatrix,
    pub phi: f64,
    pub d: f64,
    pub a: PoseMatrix,
    pub b: PoseMatrix,
    /// `A = B`: no relative displacement.
    pub degenerate: bool,
    h_a: DualQuaternion,
    h_s: DualQuaternion,
}

pub fn canonicalize_pair(a: &PoseMatrix, b: &PoseMatrix, tol: Tolerance) -> Result<CanonicalPair> {
    validate_pose(a, tol).into_result()?;
    validate_pose(b, tol).into_result()?;
    let rel = a.inverse() * *b;
    let screw = screw_invariants(&rel, tol)?;
    let degenerate = screw.angle.abs() <= tol.get() && screw.translation.abs() <= tol.get();
    let (frame, phi, d) = if degenerate {
        (PoseMatrix::identity(), 0.0, 0.0)
    } else {
        (frame_for_axis(&screw.axis), screw.angle, screw.translation)
    };
    Ok(CanonicalPair {
        frame,
        phi,
        d,
        a: *a,
        b: *b,
        degenerate,
        h_a: matrix_to_dq(a, tol)?,
        h_s: matrix_to_dq(&frame, tol)?,
    })
}

impl CanonicalPair {
    /// `B₀(φ, d)`.
    pub fn canonical_end(&self) -> PoseMatrix {
        PoseMatrix::about_z(self.phi, self.d)
    }

    pub fn start_dq(&self) -> DualQuaternion {
        self.h_a
    }

    pub fn frame_dq(&self) -> DualQuaternion {
        self.h_s
    }

    /// `(A·S, S⁻¹)` as unit dual quaternions.
    pub fn outer_factors(&self) -> (DualQuaternion, DualQuaternion) {
        (self.h_a * self.h_s, self.h_s.conj())
    }

    /// `S⁻¹ A⁻¹ X S`.
    pub fn to_canonical(&self, x: &PoseMatrix) -> PoseMatrix {
        self.frame.inverse() * self.a.inverse() * *x * self.frame
    }

    pub fn from_canonical(&self, x: &PoseMatrix) -> PoseMatrix {
        self.a * self.frame * *x * self.frame.inverse()
    }

    pub fn to_canonical_dq(&self, h: DualQuaternion) -> DualQuaternion {
        let (l, r) = self.outer_factors();
        l.conj() * h * r.conj()
    }

    pub fn from_canonical_dq(&self, h: DualQuaternion) -> DualQuaternion {
        let (l, r) = self.outer_factors();
        l * h * r
    }

    /// The common axis of the pair's cylinder group, in world coordinates.
    pub fn world_axis(&self) -> Axis {
        let g = self.a * self.frame;
        Axis::new(g.translation, g.linear.column(2).into_owned())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    const TOL: Tolerance = Tolerance::DEFAULT;

    #[test]
    fn identical_poses_are_degenerate() {
        let i = PoseMatrix::identity();
        let pair = canonicalize_pair(&i, &i, TOL).unwrap();
        assert!(pair.degenerate);
        assert_eq!((pair.phi, pair.d), (0.0, 0.0));
    }

    #[test]
    fn already_canonical() {
        let b = PoseMatrix::about_z(FRAC_PI_2, 1.0);
        let pair = canonicalize_pair(&PoseMatrix::identity(), &b, TOL).unwrap();
        assert!(pair.frame.max_difference(&PoseMatrix::identity()) < 1e-15);
        assert!((pair.phi - FRAC_PI_2).abs() < 1e-15);
        assert!((pair.d - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pure_translation_axis() {
        let b = PoseMatrix::translation(Vector3::new(0.0, 3.0, 4.0));
        let pair = canonicalize_pair(&PoseMatrix::identity(), &b, TOL).unwrap();
        assert_eq!(pair.phi, 0.0);
        assert!((pair.d - 5.0).abs() < 1e-14);
        assert!(pair.to_canonical(&b).max_difference(&pair.canonical_end()) < 1e-14);
    }

    #[test]
    fn screw_of_half_turn_with_offset() {
        let pose = PoseMatrix::translation(Vector3::new(2.0, 0.0, 0.5))
            * PoseMatrix::rotation(&Vector3::z(), std::f64::consts::PI);
        let s = screw_invariants(&pose, TOL).unwrap();
        assert!((s.angle - std::f64::consts::PI).abs() < 1e-12);
        assert!((s.axis.point()[0] - 1.0).abs() < 1e-12);
        assert!((s.translation.abs() - 0.5).abs() < 1e-12);
    }
}
